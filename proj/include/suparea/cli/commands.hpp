#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace suparea::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailure = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitBudget = 4,
};

/// Entry point behind the `suparea` binary. `args` excludes the program name.
/// Data goes to `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace suparea::cli
