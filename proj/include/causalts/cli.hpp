#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causalts {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitNumericalFailure = 2,
  kExitIdentifiability = 3,
};

// Subcommands: analyze, test, generate, irf. `args` excludes the program
// name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causalts
