#pragma once

#include <string>
#include <vector>

namespace slim::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kDataError = 2,
  kSolverLimit = 3,
};

/// Runs one invocation; `args` excludes the program name. Never throws.
int run(const std::vector<std::string>& args);

}  // namespace slim::cli
