#pragma once

#include <string>

#include "json.hpp"

namespace dualframe::cli {

using json = nlohmann::ordered_json;

struct RunOptions {
  bool parallel = false;
  int resolution = 128;      // export grid resolution
  std::string what;          // export selection: psi | phi | shells | lattice
  std::string outPath;       // export target file
};

struct CommandResult {
  int exitCode = 0;
  json report;
  std::string error;  // non-empty when exitCode != 0
};

// Exit codes: 0 success / all checks passed, 1 verification or separation
// failure, 2 invalid input.
CommandResult run_inspect(const json& config, const RunOptions& opts = {});
CommandResult run_build(const json& config, const RunOptions& opts = {});
CommandResult run_verify(const json& config, const RunOptions& opts = {});
CommandResult run_transform(const json& config, const RunOptions& opts = {});
CommandResult run_export(const json& config, const RunOptions& opts);

json load_config_file(const std::string& path);

}  // namespace dualframe::cli
