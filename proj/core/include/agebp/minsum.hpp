#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agebp/lifetime.hpp"
#include "agebp/offspring.hpp"
#include "agebp/rng.hpp"
#include "agebp/verdict.hpp"

namespace agebp {

// f(0) = m0, f(n+1) = F_D^{<-}(1 - 1/f(n)). Values are kept as logs since
// they grow doubly exponentially.
struct GrowthSequence {
  double m0 = 0.0;
  std::vector<long double> log_values;
  bool strictly_increasing = true;
  bool heavy_tail_alpha = false;
  std::optional<double> alpha;
  // m and m-hat with m^(1/alpha^n) <= f(n) <= m-hat^(1/alpha^n) over the computed n
  double log_m_lower = 0.0;
  double log_m_upper = 0.0;
  // first index computed from the asymptotic inverse tail, -1 if none
  int asymptotic_from = -1;

  int size() const { return static_cast<int>(log_values.size()); }
  double value(int n) const;  // +inf once beyond double range
};

GrowthSequence growth_sequence(const OffspringLaw& h, double m0, int N);

enum class MinSumMethod { ClosedForm, RatioHeuristic, MonteCarlo };
const char* to_string(MinSumMethod m);

struct MinSumReport {
  std::vector<double> terms;
  std::vector<double> partial_sums;
  Verdict verdict = Verdict::Inconclusive;
  MinSumMethod method = MinSumMethod::RatioHeuristic;
  std::string note;

  nlohmann::json to_json() const;
};

// Terms G^{<-}(1/f(n)) and the verdict on their sum.
MinSumReport minsum_series(const LifetimeLaw& G, const GrowthSequence& f);

struct MinSumOptions {
  int N = 60;
  std::optional<double> m0_override;
};

// Plumpness check, m0 from its witness (doubled), growth sequence, series.
// Laws that fail the plumpness check get Inconclusive.
MinSumReport classify_minsum(const OffspringLaw& h, const LifetimeLaw& G, const MinSumOptions& opts = {});

struct AlphaScan {
  std::vector<double> alphas;
  std::vector<Verdict> verdicts;
  bool violation = false;  // both Explosive and Conservative present
};

AlphaScan alpha_invariance_scan(const LifetimeLaw& G, const std::vector<double>& alphas,
                                const MinSumOptions& opts = {});

struct MonteCarloOptions {
  int N = 40;
  int trials = 200;
  double tail_tol = 1e-6;
  uint64_t seed = 1;
};

MinSumReport minsum_monte_carlo(double alpha, const LifetimeLaw& G, const MonteCarloOptions& opts = {});

// Min of M i.i.d. draws from G from one uniform: G^{<-}(1 - (1-U)^(1/M)),
// with M given by its log so that astronomically large M works.
double sample_min_shortcut(const LifetimeLaw& G, double log_M, Rng& rng);

}  // namespace agebp
