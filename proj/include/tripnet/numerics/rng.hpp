#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace tripnet {

/// Seeded xoshiro256** generator (Blackman & Vigna, 2018).
///
/// State is expanded from the 64-bit seed with SplitMix64
/// (x += 0x9E3779B97F4A7C15; z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9;
///  z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^= z >> 31).
/// Each draw computes rotl(s1 * 5, 7) * 9, then advances with
/// t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45).
/// Streams are bit-identical on every platform for a given seed.
///
/// Single owner only; derive child seeds with derive_seed() for parallel work.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() noexcept;

    /// Uniform in [lo, hi). ArgumentError unless lo < hi.
    double uniform(double lo, double hi);

    /// Unbiased integer in [0, bound). ArgumentError if bound == 0.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Standard normal draw (Box-Muller, cosine branch only).
    double normal() noexcept;

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::array<std::uint64_t, 4> s_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic child seed from a parent seed and a path of stream labels.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept;

/// Seeded permutation of {0, ..., n-1}.
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed);

}  // namespace tripnet
