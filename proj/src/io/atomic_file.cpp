#include "tripnet/io/atomic_file.hpp"

#include <fstream>
#include <system_error>
#include <unistd.h>

#include "tripnet/error.hpp"

namespace tripnet::io {

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    const auto tmp = path.parent_path() /
                     (path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + path.string() + "' for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("failed writing '" + path.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot replace '" + path.string() + "': " + ec.message());
    }
}

}  // namespace tripnet::io
