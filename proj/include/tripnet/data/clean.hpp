#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tripnet/data/schema.hpp"
#include "tripnet/data/table.hpp"

namespace tripnet::data {

struct CleanReport {
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;
    double removed_fraction = 0.0;  // (rows_in - rows_out) / rows_in, 0 for an empty table
    /// Absent-cell count for every schema column, in schema order.
    std::vector<std::pair<std::string, std::size_t>> missing_per_column;
    /// Rows with a blank in one of kRequiredColumns (the subset of drops the
    /// original five-column rule would also have made).
    std::size_t rows_missing_required = 0;
    /// Header columns outside the schema; ignored.
    std::vector<std::string> ignored_columns;

    /// Flat `key=value` lines.
    std::string to_text() const;
};

enum class CleanScope {
    FeaturesAndTargets,  // training / evaluation input
    FeaturesOnly,        // prediction input; target columns optional
};

struct CleanResult {
    /// Header is the schema columns in canonical order; every cell is present.
    RawTable table;
    CleanReport report;
    /// Source row index of each kept row.
    std::vector<std::size_t> kept_rows;
};

/// Drops every row with an absent cell in any schema column (features and, in
/// FeaturesAndTargets scope, both targets). SchemaError names the first schema
/// column missing from the header. Idempotent.
CleanResult clean(const RawTable& table, const FeatureSchema& schema,
                  CleanScope scope = CleanScope::FeaturesAndTargets);

}  // namespace tripnet::data
