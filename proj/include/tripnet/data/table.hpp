#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tripnet::data {

using Cell = std::optional<double>;

/// Parsed CSV: header verbatim, one optional number per cell.
/// Empty and non-numeric cells are absent.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
    std::string provenance;

    std::optional<std::size_t> column_index(std::string_view name) const noexcept;

    friend bool operator==(const RawTable& a, const RawTable& b) {
        return a.header == b.header && a.rows == b.rows;
    }
};

/// Reads comma-separated text whose first line is the header.
/// Throws FormatError for a missing header or a row with the wrong cell count.
RawTable parse_csv(std::istream& in, std::string provenance = "<stream>");

/// parse_csv on a file; IoError if it cannot be opened.
RawTable read_csv(const std::filesystem::path& path);

/// Parses one cell: integers, decimals and scientific notation. Anything else
/// (including nan/inf and locale-specific separators) is absent.
Cell parse_cell(std::string_view text) noexcept;

/// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double value);

/// Serializes a table; absent cells are written as empty strings.
std::string to_csv(const RawTable& table);

}  // namespace tripnet::data
