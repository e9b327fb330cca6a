#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppid::cli {

/// Exit statuses of run().
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed_checks = 1;
inline constexpr int exit_invalid = 2;

/// Runs the command line `args` (without the program name). Artifacts go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppid::cli
