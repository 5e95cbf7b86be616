#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ewens::cli {

/// Exit codes: 0 every check passed, 1 a check failed, 2 usage error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ewens::cli
