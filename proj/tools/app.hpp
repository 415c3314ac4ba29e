#pragma once

#include <string>
#include <vector>

namespace cylev::app {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kConfigError = 2,
  kNumericFailure = 3,
};

/// Runs `cylev <symbol|check|simulate|validate|ou> --config <path> [--seed N]
/// [--workers K] [--out DIR]`. `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace cylev::app
