#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arbor {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,
  kExitBudget = 3,
  kExitEmpty = 4,
};

/// Runs the tool on args (without the program name), writing reports to out
/// and diagnostics to err. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arbor
