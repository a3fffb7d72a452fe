#include "tripnet/data/clean.hpp"

#include <algorithm>
#include <sstream>

#include "tripnet/error.hpp"

namespace tripnet::data {

std::string CleanReport::to_text() const {
    std::ostringstream out;
    out << "rows_in=" << rows_in << '\n'
        << "rows_out=" << rows_out << '\n'
        << "removed_fraction=" << format_number(removed_fraction) << '\n'
        << "rows_missing_required=" << rows_missing_required << '\n';
    for (const auto& [col, count] : missing_per_column) {
        out << "missing." << col << '=' << count << '\n';
    }
    out << "ignored_columns=";
    for (std::size_t i = 0; i < ignored_columns.size(); ++i) {
        out << (i ? "," : "") << ignored_columns[i];
    }
    out << '\n';
    return out.str();
}

CleanResult clean(const RawTable& table, const FeatureSchema& schema, CleanScope scope) {
    std::vector<std::string> columns =
        scope == CleanScope::FeaturesAndTargets ? schema.all_columns() : schema.features();

    std::vector<std::size_t> source;
    source.reserve(columns.size());
    for (const auto& col : columns) {
        const auto idx = table.column_index(col);
        if (!idx) {
            throw SchemaError("input '" + table.provenance + "' is missing column '" + col + "'");
        }
        source.push_back(*idx);
    }

    std::vector<bool> is_required(columns.size(), false);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        is_required[c] = std::find(kRequiredColumns.begin(), kRequiredColumns.end(), columns[c]) !=
                         kRequiredColumns.end();
    }

    CleanResult result;
    result.table.header = columns;
    result.table.provenance = table.provenance;
    auto& report = result.report;
    report.rows_in = table.rows.size();
    for (const auto& col : columns) {
        report.missing_per_column.emplace_back(col, 0);
    }
    for (const auto& h : table.header) {
        const bool known = std::find(columns.begin(), columns.end(), h) != columns.end();
        const bool optional_target =
            scope == CleanScope::FeaturesOnly &&
            std::find(kTargetNames.begin(), kTargetNames.end(), h) != kTargetNames.end();
        if (!known && !optional_target) {
            report.ignored_columns.push_back(h);
        }
    }

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        bool complete = true;
        bool missing_required = false;
        std::vector<Cell> out;
        out.reserve(columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const Cell& cell = row[source[c]];
            if (!cell) {
                complete = false;
                missing_required = missing_required || is_required[c];
                ++report.missing_per_column[c].second;
            }
            out.push_back(cell);
        }
        if (missing_required) {
            ++report.rows_missing_required;
        }
        if (complete) {
            result.table.rows.push_back(std::move(out));
            result.kept_rows.push_back(r);
        }
    }

    report.rows_out = result.table.rows.size();
    report.removed_fraction =
        report.rows_in == 0
            ? 0.0
            : static_cast<double>(report.rows_in - report.rows_out) / static_cast<double>(report.rows_in);
    return result;
}

}  // namespace tripnet::data
