#pragma once

#include <string>

#include "hierctrl/config.hpp"

namespace hierctrl {

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 config, 3 regions, 4 solver non-convergence
  std::string summary_json;
};

// Subcommands: solve | follower | leader | sweep-eps | sweep-gamma | verify | all.
// Writes run_manifest.json, summary.json and the per-run CSV/JSON artifacts
// under out_dir; deterministic for a fixed config+seed. Throws ConfigError on
// an unknown subcommand; solver/region failures are reported through the exit
// code and summary instead of escaping.
RunResult run_subcommand(const std::string& subcommand, const RunConfig& config,
                         const std::string& out_dir);

const char* version_string();

}  // namespace hierctrl
