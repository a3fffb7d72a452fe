#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tripnet/data/schema.hpp"
#include "tripnet/data/table.hpp"
#include "tripnet/numerics/matrix.hpp"

namespace tripnet::data {

/// Feature matrix (n x schema width) and non-negative target column (n x 1).
struct Dataset {
    Matrix features;
    Matrix target;
    FeatureSchema schema;
    Target target_name;

    Dataset(Matrix features, Matrix target, FeatureSchema schema, Target target_name);

    std::size_t size() const noexcept { return features.rows(); }
};

/// Builds a Dataset from a cleaned table: features in schema order, the chosen
/// target extracted, the other target discarded. Row order is preserved.
Dataset assemble(const RawTable& cleaned, const FeatureSchema& schema, Target target);

/// Feature matrix only (prediction input).
Matrix assemble_features(const RawTable& cleaned, const FeatureSchema& schema);

Dataset subset(const Dataset& ds, std::span<const std::size_t> rows);

/// Per-feature z-score parameters. stds uses the population definition (divide by n).
struct ScalerParams {
    std::vector<double> means;
    std::vector<double> stds;

    std::size_t width() const noexcept { return means.size(); }

    friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

/// SchemaError unless lengths agree, every std is finite and positive.
void validate(const ScalerParams& p);

ScalerParams fit_scaler(const Dataset& ds);

Matrix apply_scaler(const Matrix& features, const ScalerParams& p);
Dataset apply_scaler(const Dataset& ds, const ScalerParams& p);
Dataset invert_scaler(const Dataset& ds, const ScalerParams& p);

struct SplitFractions {
    double train = 0.7;
    double val = 0.2;
    double test = 0.1;
};

/// "0.7,0.2,0.1" -> fractions. FormatError on malformed text.
SplitFractions parse_split(std::string_view text);

/// Row indices of each part, ascending within a part.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Seeded permutation: the first floor(n*test) rows go to test, the next
/// floor(n*val) to validation, the remainder to train.
SplitIndices split_indices(std::size_t n, SplitFractions f, std::uint64_t seed);

/// Parts with zero rows are std::nullopt.
struct SplitDatasets {
    std::optional<Dataset> train;
    std::optional<Dataset> val;
    std::optional<Dataset> test;
};

SplitDatasets split(const Dataset& ds, SplitFractions f, std::uint64_t seed);

}  // namespace tripnet::data
