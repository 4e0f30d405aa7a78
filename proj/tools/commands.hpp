#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "agebp/config.hpp"

namespace agebp::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNotConverged = 2, kDominationViolated = 3 };

struct CommandResult {
  int exit_code = kOk;
  nlohmann::json report;  // always embeds the resolved config and master seed
  std::string csv;        // plot-ready table for --format csv
  std::string summary;    // one line for the terminal
};

CommandResult cmd_solve(const RunConfig& cfg);
CommandResult cmd_minsum(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_compare(const RunConfig& cfg);
CommandResult cmd_survival(const RunConfig& cfg);

// Writes the report to `path` (stdout if empty). CSV output also writes the
// report to `<path>.meta.json`.
void write_result(const CommandResult& r, OutputFormat format, const std::string& path);

}  // namespace agebp::cli
