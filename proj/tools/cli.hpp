#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scmkit::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConfigError = 2,
  kIoError = 3,
  kAnalysisError = 4,
};

/// Runs one command line (args exclude the program name). Diagnostics go to
/// `err`, informational output to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scmkit::cli
