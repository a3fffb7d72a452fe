#include "tripnet/data/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "tripnet/error.hpp"
#include "tripnet/numerics/rng.hpp"

namespace tripnet::data {
namespace {

std::vector<double> gather(const RawTable& table, std::span<const std::size_t> cols) {
    std::vector<double> out;
    out.reserve(table.rows.size() * cols.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c : cols) {
            const Cell& cell = table.rows[r][c];
            if (!cell) {
                throw ArgumentError("assemble: row " + std::to_string(r) + " column '" +
                                    table.header[c] + "' is empty; clean the table first");
            }
            out.push_back(*cell);
        }
    }
    return out;
}

std::vector<std::size_t> locate(const RawTable& table, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
        const auto i = table.column_index(n);
        if (!i) {
            throw SchemaError("table '" + table.provenance + "' is missing column '" + n + "'");
        }
        idx.push_back(*i);
    }
    return idx;
}

}  // namespace

Dataset::Dataset(Matrix f, Matrix t, FeatureSchema s, Target name)
    : features(std::move(f)), target(std::move(t)), schema(std::move(s)), target_name(name) {
    if (features.cols() != schema.width()) {
        throw SchemaError("dataset: feature matrix has " + std::to_string(features.cols()) +
                          " columns, schema has " + std::to_string(schema.width()));
    }
    if (target.cols() != 1 || target.rows() != features.rows()) {
        throw ShapeError("dataset: target " + to_string(target.shape()) + " does not match features " +
                         to_string(features.shape()));
    }
    for (std::size_t i = 0; i < target.rows(); ++i) {
        if (target(i, 0) < 0.0) {
            throw ArgumentError("dataset: target " + std::string(to_string(name)) + " is negative at row " +
                                std::to_string(i));
        }
    }
}

Dataset assemble(const RawTable& cleaned, const FeatureSchema& schema, Target target) {
    if (cleaned.rows.empty()) {
        throw ArgumentError("assemble: no rows left in '" + cleaned.provenance + "'");
    }
    const auto feature_cols = locate(cleaned, schema.features());
    const auto target_col = locate(cleaned, {std::string(to_string(target))});
    const std::size_t n = cleaned.rows.size();
    return Dataset(Matrix(n, schema.width(), gather(cleaned, feature_cols)),
                   Matrix(n, 1, gather(cleaned, target_col)), schema, target);
}

Matrix assemble_features(const RawTable& cleaned, const FeatureSchema& schema) {
    if (cleaned.rows.empty()) {
        throw ArgumentError("assemble: no rows left in '" + cleaned.provenance + "'");
    }
    const auto cols = locate(cleaned, schema.features());
    return Matrix(cleaned.rows.size(), schema.width(), gather(cleaned, cols));
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> rows) {
    return Dataset(select_rows(ds.features, rows), select_rows(ds.target, rows), ds.schema,
                   ds.target_name);
}

void validate(const ScalerParams& p) {
    if (p.means.size() != p.stds.size() || p.means.empty()) {
        throw SchemaError("scaler: means/stds lengths " + std::to_string(p.means.size()) + "/" +
                          std::to_string(p.stds.size()) + " are inconsistent");
    }
    for (std::size_t j = 0; j < p.width(); ++j) {
        if (!std::isfinite(p.means[j]) || !std::isfinite(p.stds[j]) || !(p.stds[j] > 0.0)) {
            throw SchemaError("scaler: entry " + std::to_string(j) +
                              " needs a finite mean and a positive finite std");
        }
    }
}

ScalerParams fit_scaler(const Dataset& ds) {
    const std::size_t n = ds.size();
    if (n < 2) {
        throw ArgumentError("fit_scaler: need at least 2 rows, got " + std::to_string(n));
    }
    const std::size_t w = ds.features.cols();
    ScalerParams p{std::vector<double>(w, 0.0), std::vector<double>(w, 0.0)};
    for (std::size_t j = 0; j < w; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += ds.features(i, j);
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ds.features(i, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        if (!(sd > 0.0)) {
            throw DegenerateFeatureError(ds.schema.features()[j]);
        }
        p.means[j] = mean;
        p.stds[j] = sd;
    }
    return p;
}

Matrix apply_scaler(const Matrix& features, const ScalerParams& p) {
    validate(p);
    if (features.cols() != p.width()) {
        throw SchemaError("apply_scaler: features have " + std::to_string(features.cols()) +
                          " columns, scaler has " + std::to_string(p.width()));
    }
    std::vector<double> out(features.size());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        for (std::size_t j = 0; j < features.cols(); ++j) {
            out[i * features.cols() + j] = (features(i, j) - p.means[j]) / p.stds[j];
        }
    }
    return Matrix(features.rows(), features.cols(), std::move(out));
}

Dataset apply_scaler(const Dataset& ds, const ScalerParams& p) {
    return Dataset(apply_scaler(ds.features, p), ds.target, ds.schema, ds.target_name);
}

Dataset invert_scaler(const Dataset& ds, const ScalerParams& p) {
    validate(p);
    if (ds.features.cols() != p.width()) {
        throw SchemaError("invert_scaler: features have " + std::to_string(ds.features.cols()) +
                          " columns, scaler has " + std::to_string(p.width()));
    }
    std::vector<double> out(ds.features.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < p.width(); ++j) {
            out[i * p.width() + j] = ds.features(i, j) * p.stds[j] + p.means[j];
        }
    }
    return Dataset(Matrix(ds.size(), p.width(), std::move(out)), ds.target, ds.schema,
                   ds.target_name);
}

SplitFractions parse_split(std::string_view text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start);
        const Cell v = parse_cell(token);
        if (!v) {
            throw FormatError("split: '" + std::string(token) + "' is not a number");
        }
        parts.push_back(*v);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 3) {
        throw FormatError("split: expected three comma-separated fractions train,val,test");
    }
    return {parts[0], parts[1], parts[2]};
}

SplitIndices split_indices(std::size_t n, SplitFractions f, std::uint64_t seed) {
    for (double x : {f.train, f.val, f.test}) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ArgumentError("split: fractions must be finite and non-negative");
        }
    }
    if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9) {
        throw ArgumentError("split: fractions must sum to 1 (got " +
                            format_number(f.train + f.val + f.test) + ")");
    }
    if (f.train > 0.0 && f.val > 0.0 && f.test > 0.0 && n < 3) {
        throw ArgumentError("split: need at least 3 rows for a three-way split");
    }
    // The small slack keeps products such as 100 * 0.29 from flooring one short.
    const auto take = [n](double frac) {
        return std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * frac + 1e-9)));
    };
    const std::size_t n_test = take(f.test);
    const std::size_t n_val = std::min(n - n_test, take(f.val));

    const auto perm = permutation(n, seed);
    SplitIndices out;
    out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.val.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test),
                   perm.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
    out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), perm.end());
    for (auto* part : {&out.train, &out.val, &out.test}) {
        std::sort(part->begin(), part->end());
    }
    return out;
}

SplitDatasets split(const Dataset& ds, SplitFractions f, std::uint64_t seed) {
    const auto idx = split_indices(ds.size(), f, seed);
    const auto part = [&ds](const std::vector<std::size_t>& rows) -> std::optional<Dataset> {
        if (rows.empty()) return std::nullopt;
        return subset(ds, rows);
    };
    return {part(idx.train), part(idx.val), part(idx.test)};
}

}  // namespace tripnet::data
