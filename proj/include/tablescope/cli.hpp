#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tablescope::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kScorerFailure = 2,
  kUsageError = 3,
};

/// Runs one subcommand. `args` excludes the program name. Data goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tablescope::cli
