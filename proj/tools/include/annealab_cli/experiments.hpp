#pragma once

#include <iosfwd>
#include <vector>

#include "annealab_cli/config.hpp"

namespace annealab::cli {

// Exit status for a run whose checks did not hold (verify-mapping).
inline constexpr int kVerificationFailed = 5;

struct RunResult {
  int status = 0;
  std::vector<std::string> files;  // relative to the output directory, manifest last
};

// Runs the experiment, writes its artifacts and manifest under
// config.output and prints a short summary to `log`.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace annealab::cli
