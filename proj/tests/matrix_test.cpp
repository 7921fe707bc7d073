#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "unlearn/errors.hpp"
#include "unlearn/matrix.hpp"

using namespace unlearn;
using testsupport::max_abs_diff;
using testsupport::random_well_conditioned;

TEST_CASE("invert: identity and diagonal") {
    CHECK(max_abs_diff(invert(Matrix::identity(3)), Matrix::identity(3)) == 0.0);

    const Matrix diag = Matrix::from_rows({{2, 0}, {0, 4}});
    const Matrix expected = Matrix::from_rows({{0.5, 0}, {0, 0.25}});
    CHECK(max_abs_diff(invert(diag), expected) < 1e-15);
}

TEST_CASE("invert: multiply-back oracle on random well-conditioned matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix m = random_well_conditioned(5, rng);
        const Matrix inv = invert(m);
        CHECK(max_abs_diff(matmul(m, inv), Matrix::identity(5)) < 1e-8);
        CHECK(max_abs_diff(matmul(inv, m), Matrix::identity(5)) < 1e-8);
    }
}

TEST_CASE("invert: involution within 1e-6") {
    std::mt19937_64 rng(12);
    for (std::size_t n : {2, 5, 16}) {
        const Matrix m = random_well_conditioned(n, rng);
        CHECK(max_abs_diff(invert(invert(m)), m) < 1e-6);
    }
}

TEST_CASE("invert: singular and near-singular inputs") {
    CHECK_THROWS_AS(invert(Matrix(3, 3)), SingularMatrix);
    CHECK_THROWS_AS(invert(Matrix::from_rows({{1, 2}, {2, 4}})), SingularMatrix);
    // rows identical up to 1e-12: below the relative pivot threshold
    CHECK_THROWS_AS(invert(Matrix::from_rows({{1, 2}, {1, 2 + 1e-12}})), SingularMatrix);
    CHECK_THROWS_AS(invert(Matrix(2, 3)), ShapeMismatch);

    Matrix bad(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(invert(bad), InvalidParam);
}

TEST_CASE("matmul: identity, hand arithmetic, shape errors") {
    std::mt19937_64 rng(13);
    const Matrix m = testsupport::random_matrix(3, 4, -5, 5, rng);
    CHECK(max_abs_diff(matmul(Matrix::identity(3), m), m) == 0.0);

    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{1}, {1}});
    const Matrix prod = matmul(a, b);
    CHECK(prod.rows() == 2);
    CHECK(prod.cols() == 1);
    CHECK(prod(0, 0) == 3);
    CHECK(prod(1, 0) == 7);

    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeMismatch);
}

TEST_CASE("matmul: associativity within 1e-8") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 32);
        const std::size_t p = dim(rng), q = dim(rng), r = dim(rng), s = dim(rng);
        const Matrix a = testsupport::random_matrix(p, q, -10, 10, rng);
        const Matrix b = testsupport::random_matrix(q, r, -10, 10, rng);
        const Matrix c = testsupport::random_matrix(r, s, -10, 10, rng);
        CHECK(max_abs_diff(matmul(matmul(a, b), c), matmul(a, matmul(b, c))) < 1e-8);
    }
}

TEST_CASE("matmul round trip through invert: (B * A^-1) * A == B") {
    std::mt19937_64 rng(15);
    const Matrix a = random_well_conditioned(6, rng);
    const Matrix b = testsupport::random_matrix(4, 6, -3, 3, rng);
    const Matrix f = matmul(b, invert(a));
    CHECK(max_abs_diff(matmul(f, a), b) < 1e-8);
}

TEST_CASE("column_mean: fixed cases and errors") {
    CHECK(column_mean({{1, 2, 3}}) == std::vector<double>{1, 2, 3});
    CHECK(column_mean({{1, 2, 3}, {3, 4, 5}}) == std::vector<double>{2, 3, 4});
    CHECK_THROWS_AS(column_mean({}), EmptyInput);
    CHECK_THROWS_AS(column_mean({{1, 2}, {1, 2, 3}}), ShapeMismatch);
}

TEST_CASE("column_mean: mean of Gaussian draws lands near the center") {
    std::mt19937_64 rng(16);
    const std::vector<double> mu = {0.3, -1.5, 2.0, 0.0};
    std::normal_distribution<double> noise(0.0, 0.1); // variance 0.01
    std::vector<std::vector<double>> draws(1000);
    for (auto& v : draws) {
        v = mu;
        for (double& x : v) x += noise(rng);
    }
    const auto mean = column_mean(draws);
    for (std::size_t i = 0; i < mu.size(); ++i)
        CHECK(std::abs(mean[i] - mu[i]) < 0.02);
}
