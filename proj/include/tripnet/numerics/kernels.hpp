#pragma once

// Flat-array arithmetic kernels behind Matrix and the optimizer.
//
// Every kernel has a portable scalar reference and, where the CPU allows, an
// AVX2 variant chosen at runtime. The vector variants keep the scalar
// accumulation order (vectorizing across independent output lanes only) and
// never fuse multiply-add, so both paths produce bit-identical results. The
// whole project is compiled with -ffp-contract=off to keep it that way.

#include <cstddef>
#include <string_view>

namespace tripnet::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct AdamCoefficients {
    double beta1;
    double beta2;
    double epsilon;
    double learning_rate;
    double bias_correction1;  // 1 - beta1^t
    double bias_correction2;  // 1 - beta2^t
};

/// Function table for one instruction set. All pointers are non-null.
struct KernelTable {
    Isa isa;

    // c[m x n] = a[m x k] * b[k x n]; c[i,j] accumulates over k in ascending order from 0.0.
    void (*gemm)(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                 std::size_t n);
    // out[i,j] = m[i,j] + bias[j]
    void (*add_row_broadcast)(const double* m, const double* bias, double* out, std::size_t rows,
                              std::size_t cols);
    // out[i] = a[i] * b[i]
    void (*hadamard)(const double* a, const double* b, double* out, std::size_t len);
    // out[j] = sum over rows of m[i,j], rows visited in ascending order from 0.0.
    void (*column_sums)(const double* m, double* out, std::size_t rows, std::size_t cols);
    // out[i] = max(0, z[i])
    void (*relu)(const double* z, double* out, std::size_t len);
    // out[i] = z[i] > 0 ? 1 : 0
    void (*relu_grad)(const double* z, double* out, std::size_t len);
    // In-place Adam update of params with first/second moment buffers.
    void (*adam_update)(double* params, double* m, double* v, const double* grad, std::size_t len,
                        const AdamCoefficients& coeff);
};

const KernelTable& scalar_table() noexcept;

/// Null when the build or the running CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

/// Table currently in use. Chosen on first call: the best supported ISA, unless
/// the TRIPNET_KERNELS environment variable is set to "scalar".
const KernelTable& active() noexcept;

/// Force a specific ISA (tests, benchmarks). Returns false if unsupported here.
bool select(Isa isa) noexcept;

bool supported(Isa isa) noexcept;

}  // namespace tripnet::kernels
