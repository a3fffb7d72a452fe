#pragma once

#include <filesystem>
#include <string_view>

namespace tripnet::io {

/// Writes to a sibling temp file, then renames over `path`. IoError on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace tripnet::io
