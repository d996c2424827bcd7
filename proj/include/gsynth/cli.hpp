#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsynth::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kInfeasible = 2,
  kImpure = 3,
  kUnstable = 4,
  kNotGenerated = 5,
};

/// Runs one command; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsynth::cli
