#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "agebp/process.hpp"
#include "agebp/rng.hpp"

namespace agebp {

struct SimConfig {
  ProcessSpec spec;
  double horizon = 10.0;
  int64_t cap = 100000;
  int trials = 1;
  uint64_t master_seed = 1;
  unsigned threads = 0;       // 0: hardware concurrency
  bool record_births = false;  // keep the processed birth times in SimOutcome
};

struct SimOutcome {
  bool exploded_proxy = false;  // cap reached by the horizon
  double proxy_time = 0.0;      // time of the cap-th birth, +inf otherwise
  int64_t births = 0;
  std::vector<int64_t> generation_sizes;
  double children_considered = 0.0;  // sum of offspring draws
  double children_admitted = 0.0;    // those passing the admission rule
  std::vector<double> birth_times;   // only with record_births

  bool operator==(const SimOutcome&) const = default;
};

// Runs trials of one config. Each trial owns an Rng seeded with
// derive_seed(master_seed, trial). Consumption order per node: offspring
// uniform, period uniform (also for classical), admitted count (skipped when
// every child is admitted), then one uniform per scheduled child in
// increasing lifetime order.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config);
  ~Simulator();
  Simulator(Simulator&&) noexcept;

  SimOutcome run(uint64_t trial) const;
  const SimConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SimOutcome simulate_forward(const SimConfig& config, uint64_t trial = 0);
SimOutcome simulate_backward(const SimConfig& config, uint64_t trial = 0);

struct EmpiricalDistribution {
  std::vector<double> times;  // sorted finite proxy times
  int64_t censored = 0;       // trials without a proxy time
  int64_t trials = 0;

  double cdf(double t) const;
  void write_csv(std::ostream& os) const;
};

EmpiricalDistribution empirical_explosion_time(const SimConfig& config);

struct DominationReport {
  bool violated = false;
  double max_gap = 0.0;
  double critical_value = 0.0;
  nlohmann::json to_json() const;
};

// One-sided KS test of lower <=_d upper: sup_t (F_upper - F_lower), censored
// values counted as +inf.
DominationReport domination_test(const EmpiricalDistribution& lower, const EmpiricalDistribution& upper,
                                 double level = 0.01);

// Per-child rule applied literally: X ~ G against the child's own period.
double backward_admission_rate(const ProcessSpec& spec, int64_t children, Rng& rng);

struct GrowthDiagnostic {
  std::vector<std::vector<double>> trajectories;  // alpha^n log(Z_n + 1), n = 0..max_gen
  std::vector<bool> stabilized;
  double stabilized_fraction = 0.0;
};

struct DaviesOptions {
  uint64_t seed = 1;
  double exact_limit = 1.0e5;  // generations up to this size are summed draw by draw
  int top_order_stats = 100;
};

GrowthDiagnostic davies_growth_diagnostic(const OffspringLaw& h, double alpha, int trials, int max_gen,
                                          const DaviesOptions& opts = {});

// Relative spread of the last three values below 10 %, relative to
// max(|mean|, 0.05) so that trajectories settling at 0 count.
bool trajectory_stabilized(const std::vector<double>& traj);

}  // namespace agebp
