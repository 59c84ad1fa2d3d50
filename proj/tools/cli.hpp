#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jtm::cli {

inline constexpr std::string_view kVersion = "1.0.0";

/// Process exit codes.
enum ExitCode : int { kOk = 0, kProcessingError = 1, kUsageError = 2 };

/// Runs the `jtm` command line. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace jtm::cli
