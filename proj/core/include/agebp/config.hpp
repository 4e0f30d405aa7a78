#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "agebp/lifetime.hpp"
#include "agebp/offspring.hpp"
#include "agebp/process.hpp"

namespace agebp {

struct GridSection {
  double dt = 1e-3;
  double horizon = 1.0;
};

struct SolverSection {
  double tol = 1e-8;
  int max_iters = 10000;
  double threshold = 1e-2;
  unsigned threads = 0;
};

struct SimSection {
  int64_t trials = 1000;
  int64_t cap = 100000;
  uint64_t master_seed = 1;
  double horizon = 10.0;
  unsigned threads = 0;
};

struct MinSumSection {
  int N = 60;
  std::optional<double> m0_override;
};

enum class OutputFormat { Csv, Json };

struct OutputSection {
  std::string path;  // empty: stdout
  OutputFormat format = OutputFormat::Json;
};

// One run, fully resolved: every default is filled in.
struct RunConfig {
  nlohmann::json process;  // validated tagged record, kept for reports
  ProcessSpec spec;
  GridSection grid;
  SolverSection solver;
  SimSection sim;
  MinSumSection minsum;
  OutputSection output;

  nlohmann::json to_json() const;
};

// Throws ConfigError naming the offending field ("process.offspring.alpha").
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

OffspringLaw parse_offspring(const nlohmann::json& j, const std::string& where = "offspring");
LifetimeLaw parse_lifetime(const nlohmann::json& j, const std::string& where = "lifetime");
ProcessSpec parse_process(const nlohmann::json& j, const std::string& where = "process");

}  // namespace agebp
