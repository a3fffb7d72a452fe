#include "tripnet/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "tripnet/error.hpp"
#include "tripnet/numerics/kernels.hpp"

namespace tripnet {
namespace {

void require_nonempty(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be at least 1x1, got " + to_string({rows, cols}));
    }
}

void require_finite(std::span<const double> values, const char* op) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(op) + ": result contains a non-finite value");
        }
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + to_string(a.shape()) + " vs " +
                         to_string(b.shape()));
    }
}

Matrix finish(std::size_t rows, std::size_t cols, std::vector<double> out, const char* op) {
    require_finite(out, op);
    return Matrix(rows, cols, std::move(out));
}

}  // namespace

std::string to_string(Shape s) { return std::to_string(s.rows) + "x" + std::to_string(s.cols); }

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    require_nonempty(rows, cols);
    values_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    require_nonempty(rows, cols);
    if (values_.size() != rows * cols) {
        throw ShapeError("matrix " + to_string({rows, cols}) + " needs " +
                         std::to_string(rows * cols) + " values, got " +
                         std::to_string(values_.size()));
    }
    require_finite(values_, "matrix construction");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> values;
    values.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw ShapeError("from_rows: ragged initializer (row widths differ)");
        }
        values.insert(values.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(values));
}

Matrix Matrix::column(std::span<const double> values) {
    return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::identity(std::size_t n) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
    }
    return Matrix(n, n, std::move(v));
}

Matrix Matrix::filled(std::size_t rows, std::size_t cols, double value) {
    return Matrix(rows, cols, std::vector<double>(rows * cols, value));
}

double Matrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
        throw ShapeError("index (" + std::to_string(r) + "," + std::to_string(c) +
                         ") out of range for " + to_string(shape()));
    }
    return (*this)(r, c);
}

std::span<const double> Matrix::row(std::size_t r) const {
    if (r >= rows_) {
        throw ShapeError("row " + std::to_string(r) + " out of range for " + to_string(shape()));
    }
    return std::span<const double>(values_).subspan(r * cols_, cols_);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: shape mismatch " + to_string(a.shape()) + " x " +
                         to_string(b.shape()));
    }
    std::vector<double> out(a.rows() * b.cols());
    kernels::active().gemm(a.values().data(), b.values().data(), out.data(), a.rows(), a.cols(),
                           b.cols());
    return finish(a.rows(), b.cols(), std::move(out), "matmul");
}

Matrix add_row_broadcast(const Matrix& m, const Matrix& bias) {
    if (bias.rows() != 1 || bias.cols() != m.cols()) {
        throw ShapeError("add_row_broadcast: bias must be 1x" + std::to_string(m.cols()) + ", got " +
                         to_string(bias.shape()) + " for matrix " + to_string(m.shape()));
    }
    std::vector<double> out(m.size());
    kernels::active().add_row_broadcast(m.values().data(), bias.values().data(), out.data(),
                                        m.rows(), m.cols());
    return finish(m.rows(), m.cols(), std::move(out), "add_row_broadcast");
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    std::vector<double> out(a.size());
    kernels::active().hadamard(a.values().data(), b.values().data(), out.data(), a.size());
    return finish(a.rows(), a.cols(), std::move(out), "hadamard");
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    std::vector<double> out(a.size());
    std::transform(a.values().begin(), a.values().end(), b.values().begin(), out.begin(),
                   [](double x, double y) { return x + y; });
    return finish(a.rows(), a.cols(), std::move(out), "add");
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    std::vector<double> out(a.size());
    std::transform(a.values().begin(), a.values().end(), b.values().begin(), out.begin(),
                   [](double x, double y) { return x - y; });
    return finish(a.rows(), a.cols(), std::move(out), "subtract");
}

Matrix scale(const Matrix& m, double factor) {
    std::vector<double> out(m.size());
    std::transform(m.values().begin(), m.values().end(), out.begin(),
                   [factor](double x) { return x * factor; });
    return finish(m.rows(), m.cols(), std::move(out), "scale");
}

Matrix transpose(const Matrix& m) {
    std::vector<double> out(m.size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[j * m.rows() + i] = m(i, j);
        }
    }
    return Matrix(m.cols(), m.rows(), std::move(out));
}

Matrix column_sums(const Matrix& m) {
    std::vector<double> out(m.cols());
    kernels::active().column_sums(m.values().data(), out.data(), m.rows(), m.cols());
    return finish(1, m.cols(), std::move(out), "column_sums");
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> indices) {
    std::vector<double> out;
    out.reserve(indices.size() * m.cols());
    for (std::size_t idx : indices) {
        const auto r = m.row(idx);
        out.insert(out.end(), r.begin(), r.end());
    }
    return Matrix(indices.size(), m.cols(), std::move(out));
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_difference");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    }
    return worst;
}

}  // namespace tripnet
