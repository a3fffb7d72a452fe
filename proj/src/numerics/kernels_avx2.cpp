// Compiled with -mavx2 (and without -mfma). Only reached after a runtime CPU check.
#include "tripnet/numerics/kernels.hpp"

#if defined(TRIPNET_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace tripnet::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
          std::size_t n) {
    const std::size_t n_vec = n - n % kLanes;
    for (std::size_t i = 0; i < m; ++i) {
        const double* a_row = a + i * k;
        double* c_row = c + i * n;
        std::size_t j = 0;
        for (; j < n_vec; j += kLanes) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t p = 0; p < k; ++p) {
                const __m256d av = _mm256_set1_pd(a_row[p]);
                const __m256d bv = _mm256_loadu_pd(b + p * n + j);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(av, bv));
            }
            _mm256_storeu_pd(c_row + j, acc);
        }
        for (; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                acc = acc + a_row[p] * b[p * n + j];
            }
            c_row[j] = acc;
        }
    }
}

void add_row_broadcast(const double* m, const double* bias, double* out, std::size_t rows,
                       std::size_t cols) {
    const std::size_t c_vec = cols - cols % kLanes;
    for (std::size_t i = 0; i < rows; ++i) {
        const double* m_row = m + i * cols;
        double* o_row = out + i * cols;
        std::size_t j = 0;
        for (; j < c_vec; j += kLanes) {
            _mm256_storeu_pd(o_row + j,
                             _mm256_add_pd(_mm256_loadu_pd(m_row + j), _mm256_loadu_pd(bias + j)));
        }
        for (; j < cols; ++j) {
            o_row[j] = m_row[j] + bias[j];
        }
    }
}

void hadamard(const double* a, const double* b, double* out, std::size_t len) {
    const std::size_t n_vec = len - len % kLanes;
    std::size_t i = 0;
    for (; i < n_vec; i += kLanes) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < len; ++i) {
        out[i] = a[i] * b[i];
    }
}

void column_sums(const double* m, double* out, std::size_t rows, std::size_t cols) {
    const std::size_t c_vec = cols - cols % kLanes;
    std::size_t j = 0;
    for (; j < c_vec; j += kLanes) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < rows; ++i) {
            acc = _mm256_add_pd(acc, _mm256_loadu_pd(m + i * cols + j));
        }
        _mm256_storeu_pd(out + j, acc);
    }
    for (; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            acc = acc + m[i * cols + j];
        }
        out[j] = acc;
    }
}

// _mm256_max_pd(z, 0) returns the second operand unless z > 0, which matches the
// scalar `z > 0 ? z : 0` for NaN and signed zero as well.
void relu(const double* z, double* out, std::size_t len) {
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t n_vec = len - len % kLanes;
    std::size_t i = 0;
    for (; i < n_vec; i += kLanes) {
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(z + i), zero));
    }
    for (; i < len; ++i) {
        out[i] = z[i] > 0.0 ? z[i] : 0.0;
    }
}

void relu_grad(const double* z, double* out, std::size_t len) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const std::size_t n_vec = len - len % kLanes;
    std::size_t i = 0;
    for (; i < n_vec; i += kLanes) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(z + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + i, _mm256_and_pd(mask, one));
    }
    for (; i < len; ++i) {
        out[i] = z[i] > 0.0 ? 1.0 : 0.0;
    }
}

void adam_update(double* params, double* m, double* v, const double* grad, std::size_t len,
                 const AdamCoefficients& c) {
    const double one_minus_b1 = 1.0 - c.beta1;
    const double one_minus_b2 = 1.0 - c.beta2;
    const __m256d b1 = _mm256_set1_pd(c.beta1);
    const __m256d b2 = _mm256_set1_pd(c.beta2);
    const __m256d omb1 = _mm256_set1_pd(one_minus_b1);
    const __m256d omb2 = _mm256_set1_pd(one_minus_b2);
    const __m256d bc1 = _mm256_set1_pd(c.bias_correction1);
    const __m256d bc2 = _mm256_set1_pd(c.bias_correction2);
    const __m256d lr = _mm256_set1_pd(c.learning_rate);
    const __m256d eps = _mm256_set1_pd(c.epsilon);

    const std::size_t n_vec = len - len % kLanes;
    std::size_t i = 0;
    for (; i < n_vec; i += kLanes) {
        const __m256d g = _mm256_loadu_pd(grad + i);
        const __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                         _mm256_mul_pd(omb1, g));
        const __m256d vi = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                         _mm256_mul_pd(omb2, _mm256_mul_pd(g, g)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        const __m256d m_hat = _mm256_div_pd(mi, bc1);
        const __m256d v_hat = _mm256_div_pd(vi, bc2);
        const __m256d step =
            _mm256_div_pd(_mm256_mul_pd(lr, m_hat), _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
        _mm256_storeu_pd(params + i, _mm256_sub_pd(_mm256_loadu_pd(params + i), step));
    }
    for (; i < len; ++i) {
        const double g = grad[i];
        m[i] = c.beta1 * m[i] + one_minus_b1 * g;
        v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
        const double m_hat = m[i] / c.bias_correction1;
        const double v_hat = v[i] / c.bias_correction2;
        params[i] = params[i] - c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
}

constexpr KernelTable kAvx2{
    Isa::Avx2, gemm, add_row_broadcast, hadamard, column_sums, relu, relu_grad, adam_update,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table_unchecked() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace tripnet::kernels

#endif  // TRIPNET_HAVE_AVX2
