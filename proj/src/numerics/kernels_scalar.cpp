#include "tripnet/numerics/kernels.hpp"

#include <cmath>

namespace tripnet::kernels {
namespace {

void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
          std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                acc = acc + a[i * k + p] * b[p * n + j];
            }
            c[i * n + j] = acc;
        }
    }
}

void add_row_broadcast(const double* m, const double* bias, double* out, std::size_t rows,
                       std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            out[i * cols + j] = m[i * cols + j] + bias[j];
        }
    }
}

void hadamard(const double* a, const double* b, double* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        out[i] = a[i] * b[i];
    }
}

void column_sums(const double* m, double* out, std::size_t rows, std::size_t cols) {
    for (std::size_t j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            acc = acc + m[i * cols + j];
        }
        out[j] = acc;
    }
}

void relu(const double* z, double* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        out[i] = z[i] > 0.0 ? z[i] : 0.0;
    }
}

void relu_grad(const double* z, double* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        out[i] = z[i] > 0.0 ? 1.0 : 0.0;
    }
}

void adam_update(double* params, double* m, double* v, const double* grad, std::size_t len,
                 const AdamCoefficients& c) {
    const double one_minus_b1 = 1.0 - c.beta1;
    const double one_minus_b2 = 1.0 - c.beta2;
    for (std::size_t i = 0; i < len; ++i) {
        const double g = grad[i];
        m[i] = c.beta1 * m[i] + one_minus_b1 * g;
        v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
        const double m_hat = m[i] / c.bias_correction1;
        const double v_hat = v[i] / c.bias_correction2;
        params[i] = params[i] - c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
}

constexpr KernelTable kScalar{
    Isa::Scalar, gemm, add_row_broadcast, hadamard, column_sums, relu, relu_grad, adam_update,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace tripnet::kernels
