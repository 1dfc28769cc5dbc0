#pragma once

// Command-line front end: `run`, `eval`, `compare`, `classify`, `demo`.

#include <iosfwd>
#include <string>
#include <vector>

namespace qmon {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). `in` feeds the
/// streaming mode of `run`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qmon
