#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"
#include "unlearn/errors.hpp"
#include "unlearn/stats.hpp"

using namespace unlearn;

namespace {

// Brute-force oracle: evaluate |ECDF1 - ECDF2| at every sample point.
double ks_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> points = a;
    points.insert(points.end(), b.begin(), b.end());
    double sup = 0.0;
    for (double p : points) {
        const auto below = [p](const std::vector<double>& s) {
            return double(std::count_if(s.begin(), s.end(),
                                        [p](double v) { return v <= p; })) /
                   double(s.size());
        };
        sup = std::max(sup, std::abs(below(a) - below(b)));
    }
    return sup;
}

} // namespace

TEST_CASE("two_sample_ks: fixed examples") {
    CHECK(two_sample_ks(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 0.0);
    CHECK(two_sample_ks(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == 1.0);
    CHECK(two_sample_ks(std::vector<double>{1, 3}, std::vector<double>{2, 4}) == 0.5);
    CHECK_THROWS_AS(two_sample_ks(std::vector<double>{}, std::vector<double>{1}),
                    EmptyInput);
}

TEST_CASE("two_sample_ks: equals the brute-force oracle on random pairs with ties") {
    std::mt19937_64 rng(81);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> value(0, 5); // small support forces ties
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a(size(rng)), b(size(rng));
        for (double& v : a) v = value(rng);
        for (double& v : b) v = value(rng);
        CHECK(two_sample_ks(a, b) == doctest::Approx(ks_oracle(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("two_sample_ks: symmetry and monotone-transform invariance") {
    std::mt19937_64 rng(82);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> a(40), b(60);
    for (double& v : a) v = dist(rng);
    for (double& v : b) v = dist(rng) + 0.3;

    CHECK(two_sample_ks(a, b) == two_sample_ks(b, a));

    auto at = a, bt = b;
    for (double& v : at) v = std::exp(v); // strictly increasing
    for (double& v : bt) v = std::exp(v);
    CHECK(two_sample_ks(at, bt) == doctest::Approx(two_sample_ks(a, b)).epsilon(1e-12));
}

TEST_CASE("ks_phi: identical samples give exactly zero") {
    std::mt19937_64 rng(83);
    std::vector<std::vector<double>> s(30);
    for (auto& v : s) v = testsupport::random_vector(4, -2, 2, rng);
    CHECK(ks_phi(s, s, 50, 0) == 0.0);
}

TEST_CASE("ks_phi: a forced single direction reduces to the 1-d statistic") {
    std::mt19937_64 rng(84);
    std::vector<std::vector<double>> s1(25), s2(35);
    for (auto& v : s1) v = testsupport::random_vector(3, -1, 1, rng);
    for (auto& v : s2) v = testsupport::random_vector(3, -1, 2, rng);

    const std::vector<std::vector<double>> e0 = {{1, 0, 0}};
    std::vector<double> first1, first2;
    for (const auto& v : s1) first1.push_back(v[0]);
    for (const auto& v : s2) first2.push_back(v[0]);

    CHECK(ks_phi_directions(s1, s2, e0) == two_sample_ks(first1, first2));
}

TEST_CASE("ks_phi: deterministic per seed, in [0,1]") {
    std::mt19937_64 rng(85);
    std::vector<std::vector<double>> s1(20), s2(20);
    for (auto& v : s1) v = testsupport::random_vector(5, 0, 1, rng);
    for (auto& v : s2) v = testsupport::random_vector(5, 0.2, 1.2, rng);

    const double a = ks_phi(s1, s2, 64, 7);
    CHECK(a == ks_phi(s1, s2, 64, 7));
    CHECK(a != ks_phi(s1, s2, 64, 8));
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);

    CHECK_THROWS_AS(ks_phi({}, s2, 10, 0), EmptyInput);
    CHECK_THROWS_AS(ks_phi(s1, s2, 0, 0), EmptyInput);
}
