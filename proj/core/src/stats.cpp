#include "unlearn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "unlearn/errors.hpp"

namespace unlearn {

double two_sample_ks(std::span<const double> s1, std::span<const double> s2) {
    if (s1.empty() || s2.empty())
        throw EmptyInput("two_sample_ks: empty sample");

    std::vector<double> a(s1.begin(), s1.end());
    std::vector<double> b(s2.begin(), s2.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    // Merge-scan over the pooled order statistics; ties are consumed on both
    // sides before the ECDF difference is evaluated.
    const double na = double(a.size()), nb = double(b.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        sup = std::max(sup, std::abs(double(i) / na - double(j) / nb));
    }
    return sup;
}

namespace {

std::vector<double> project(const std::vector<std::vector<double>>& sample,
                            const std::vector<double>& direction) {
    std::vector<double> out(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (sample[i].size() != direction.size())
            throw ShapeMismatch("ks_phi: sample dimension does not match direction");
        double dot = 0.0;
        for (std::size_t j = 0; j < direction.size(); ++j)
            dot += sample[i][j] * direction[j];
        out[i] = dot;
    }
    return out;
}

} // namespace

double ks_phi_directions(const std::vector<std::vector<double>>& s1,
                         const std::vector<std::vector<double>>& s2,
                         const std::vector<std::vector<double>>& directions) {
    if (s1.empty() || s2.empty())
        throw EmptyInput("ks_phi: empty sample");
    if (directions.empty())
        throw EmptyInput("ks_phi: no directions");

    double total = 0.0;
    for (const auto& phi : directions)
        total += two_sample_ks(project(s1, phi), project(s2, phi));
    return total / double(directions.size());
}

double ks_phi(const std::vector<std::vector<double>>& s1,
              const std::vector<std::vector<double>>& s2,
              std::size_t num_directions, std::uint64_t seed) {
    if (s1.empty() || s2.empty())
        throw EmptyInput("ks_phi: empty sample");
    if (num_directions == 0)
        throw EmptyInput("ks_phi: need at least one direction");

    const std::size_t dim = s1.front().size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);

    std::vector<std::vector<double>> directions;
    directions.reserve(num_directions);
    while (directions.size() < num_directions) {
        std::vector<double> phi(dim);
        double norm2 = 0.0;
        for (double& v : phi) {
            v = dist(rng);
            norm2 += v * v;
        }
        if (norm2 == 0.0) continue; // degenerate draw, retry
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : phi) v *= inv;
        directions.push_back(std::move(phi));
    }
    return ks_phi_directions(s1, s2, directions);
}

} // namespace unlearn
