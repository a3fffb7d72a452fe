#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tripnet/data/schema.hpp"
#include "tripnet/data/table.hpp"
#include "tripnet/numerics/matrix.hpp"

namespace tripnet::data {

/// Generative ground truth for one target:
/// intercept + sum(coef * feature) + interaction_coef * feature_a * feature_b.
/// All coefficients are positive.
struct TruthFunction {
    struct Term {
        std::string_view feature;
        double coef;
    };

    double intercept;
    std::vector<Term> linear;
    std::string_view interaction_a;
    std::string_view interaction_b;
    double interaction_coef;

    /// row is one feature vector laid out by `schema`.
    double evaluate(const FeatureSchema& schema, std::span<const double> row) const;
    std::vector<double> evaluate(const FeatureSchema& schema, const Matrix& features) const;

    /// Human-readable formula, one line.
    std::string describe(std::string_view target_name) const;
};

const TruthFunction& truth_function(Target t);

/// n synthetic household rows over the canonical schema, both targets filled.
/// Targets are truth(features) * exp(noise_sd * N(0,1)); noise_sd == 0 gives the
/// truth values exactly. Deterministic in (n, seed, noise_sd).
RawTable synthesize(std::size_t n, std::uint64_t seed, double noise_sd);

}  // namespace tripnet::data
