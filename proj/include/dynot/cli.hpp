#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynot {

/// Exit codes: 0 success, 1 validation error, 2 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

/// Runs the command line `args` (args[0] is the program name).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynot
