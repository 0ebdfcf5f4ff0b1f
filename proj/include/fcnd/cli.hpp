#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcnd {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBudget = 2,
  kExitVerification = 3,
};

/// Entry point of the `fcndp` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcnd
