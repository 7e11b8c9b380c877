#pragma once

// Command-line front end: balance, resonances, test, series, table, verify.

#include <iosfwd>
#include <string>
#include <vector>

namespace painleve {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysisFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. The report goes to
/// `out`, usage errors and diagnostics to `err`; `in` serves `--file -`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace painleve
