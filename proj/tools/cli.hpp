#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oneshot::cli {

enum ExitCode : int {
  kOk = 0,
  kInfeasible = 1,  // computation refused, e.g. a dimension cap
  kInputError = 2,
};

// Runs the command line `args` (args[0] is the program name). Results go to
// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oneshot::cli
