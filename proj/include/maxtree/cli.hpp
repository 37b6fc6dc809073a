#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxtree::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kInvariantViolation = 2,
};

/// Runs one subcommand. `args` excludes the program name. Results go to `out`
/// (or to files named by the flags), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxtree::cli
