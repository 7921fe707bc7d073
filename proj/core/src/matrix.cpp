#include "unlearn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "unlearn/errors.hpp"

namespace unlearn {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw ShapeMismatch("matrix entries length does not equal rows*cols");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_)
            throw ShapeMismatch("ragged row in matrix literal");
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

void Matrix::set_column(std::size_t c, std::span<const double> v) {
    if (v.size() != rows_) throw ShapeMismatch("column length does not match row count");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

bool Matrix::all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ShapeMismatch("matmul: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size())
        throw ShapeMismatch("matvec: dimension mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        const auto row = a.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
    return out;
}

Matrix invert(const Matrix& m) {
    if (m.rows() != m.cols())
        throw ShapeMismatch("invert: matrix is not square");
    if (!m.all_finite())
        throw InvalidParam("invert: non-finite entry");

    const std::size_t n = m.rows();
    double max_abs = 0.0;
    for (double v : m.entries()) max_abs = std::max(max_abs, std::abs(v));
    const double tol = 1e-10 * max_abs;

    // Augmented [m | I], reduced in place.
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1.0;
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(aug(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(aug(r, col));
            if (v > best) { best = v; pivot = r; }
        }
        if (best < tol || best == 0.0)
            throw SingularMatrix("invert: pivot below tolerance");

        if (pivot != col)
            for (std::size_t j = 0; j < 2 * n; ++j)
                std::swap(aug(col, j), aug(pivot, j));

        const double scale = aug(col, col);
        for (std::size_t j = 0; j < 2 * n; ++j) aug(col, j) /= scale;

        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = aug(r, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < 2 * n; ++j)
                aug(r, j) -= factor * aug(col, j);
        }
    }

    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = aug(i, n + j);
    return inv;
}

std::vector<double> column_mean(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty())
        throw EmptyInput("column_mean: no vectors");
    const std::size_t dim = vectors.front().size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& v : vectors) {
        if (v.size() != dim)
            throw ShapeMismatch("column_mean: vectors differ in length");
        for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
    }
    for (double& v : mean) v /= static_cast<double>(vectors.size());
    return mean;
}

} // namespace unlearn
