#include "tripnet/numerics/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "tripnet/error.hpp"

namespace tripnet {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

struct Wide {
    std::uint64_t hi;
    std::uint64_t lo;
};

// Full 64x64 -> 128-bit product from 32-bit halves.
constexpr Wide mul_wide(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t a_lo = a & 0xFFFFFFFFULL, a_hi = a >> 32;
    const std::uint64_t b_lo = b & 0xFFFFFFFFULL, b_hi = b >> 32;
    const std::uint64_t ll = a_lo * b_lo;
    const std::uint64_t lh = a_lo * b_hi;
    const std::uint64_t hl = a_hi * b_lo;
    const std::uint64_t hh = a_hi * b_hi;
    const std::uint64_t mid = (ll >> 32) + (lh & 0xFFFFFFFFULL) + (hl & 0xFFFFFFFFULL);
    return {hh + (lh >> 32) + (hl >> 32) + (mid >> 32), (mid << 32) | (ll & 0xFFFFFFFFULL)};
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : s_) {
        x += kGolden;
        word = mix64(x);
    }
}

std::uint64_t Rng::next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi)) {
        throw ArgumentError("uniform: require lo < hi, got lo=" + std::to_string(lo) +
                            " hi=" + std::to_string(hi));
    }
    const double v = lo + (hi - lo) * uniform01();
    // Rounding can land exactly on hi for very narrow ranges.
    return v < hi ? v : std::nextafter(hi, lo);
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
    if (bound == 0) {
        throw ArgumentError("uniform_index: bound must be positive");
    }
    // Lemire's multiply-shift with rejection.
    Wide product = mul_wide(next_u64(), bound);
    if (product.lo < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (product.lo < threshold) {
            product = mul_wide(next_u64(), bound);
        }
    }
    return product.hi;
}

double Rng::normal() noexcept {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix64(parent + kGolden);
    for (std::uint64_t label : path) {
        h = mix64(h ^ (label + kGolden + (h << 6) + (h >> 2)));
    }
    return h;
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(idx));
    return idx;
}

}  // namespace tripnet
