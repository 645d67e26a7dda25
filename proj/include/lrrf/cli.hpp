#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrrf {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitInput = 3,
  kExitInternal = 4,
};

// Runs the command line `args` (args[0] is the program name). Reports go to
// `out` or to --out files, diagnostics and timings to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrrf
