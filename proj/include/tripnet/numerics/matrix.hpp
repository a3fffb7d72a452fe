#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tripnet {

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 0;

    friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(Shape s);

/// Dense row-major matrix of doubles.
///
/// Values are fixed at construction; every operation below returns a new
/// matrix. Matrices built by public operations have at least one row and one
/// column and hold only finite values (NumericError otherwise).
class Matrix {
public:
    /// rows x cols of zeros.
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix column(std::span<const double> values);
    static Matrix identity(std::size_t n);
    static Matrix filled(std::size_t rows, std::size_t cols, double value);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    Shape shape() const noexcept { return {rows_, cols_}; }

    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const;

    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> row(std::size_t r) const;

    /// Releases the storage; used by code that builds a replacement matrix.
    std::vector<double> take_values() && noexcept { return std::move(values_); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix add_row_broadcast(const Matrix& m, const Matrix& bias);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double factor);
Matrix transpose(const Matrix& m);
/// 1 x cols matrix of per-column sums.
Matrix column_sums(const Matrix& m);
/// Rows picked in the given order (duplicates allowed).
Matrix select_rows(const Matrix& m, std::span<const std::size_t> indices);

double max_abs_difference(const Matrix& a, const Matrix& b);

}  // namespace tripnet
