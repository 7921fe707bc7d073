#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace unlearn {

/// Dense real matrix with value semantics, row-major storage.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    /// Row-major construction from nested braces, e.g. {{1,2},{3,4}}.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {entries_.data() + r * cols_, cols_};
    }
    std::vector<double> column(std::size_t c) const;
    void set_column(std::size_t c, std::span<const double> v);

    const std::vector<double>& entries() const { return entries_; }

    bool all_finite() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

/// Standard product, shape (a.rows x b.cols). Throws ShapeMismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// Matrix-vector product a*x.
std::vector<double> matvec(const Matrix& a, std::span<const double> x);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularMatrix when a pivot magnitude falls below
/// 1e-10 times the largest absolute entry of the input.
Matrix invert(const Matrix& m);

/// Elementwise arithmetic mean of equal-length vectors. Throws EmptyInput.
std::vector<double> column_mean(const std::vector<std::vector<double>>& vectors);

} // namespace unlearn
