#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fhyper::cli {

/// Exit codes of the fhyper command line.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kStrictSkip = 3,
};

/// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fhyper::cli
