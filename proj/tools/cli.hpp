#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rdetect::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,
  kIoError = 2,
  kExperimentFailure = 3,
};

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdetect::cli
