#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tripnet::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kDivergence = 3,
    kIoFailure = 4,
};

inline constexpr const char* kVersion = "1.0.0";

/// Runs one command line (args[0] is the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tripnet::cli
