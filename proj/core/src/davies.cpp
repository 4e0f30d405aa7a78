#include <algorithm>
#include <cmath>
#include <limits>

#include "agebp/error.hpp"
#include "agebp/sim.hpp"
#include "agebp/special.hpp"
#include "parallel.hpp"

namespace agebp {

namespace {

// log of one draw of D; power-law draws go through the log inverse tail so
// nothing overflows.
long double log_draw(const OffspringLaw& h, Rng& rng) {
  if (h.alpha()) return h.log_quantile_tail(std::log(static_cast<long double>(rng.uniform_pos())));
  const double d = h.sample_real(rng);
  return d > 0.0 ? std::log(static_cast<long double>(d)) : -std::numeric_limits<long double>::infinity();
}

// log of the sum of exp(log_n) i.i.d. copies of D, for generations too big to
// sum draw by draw.
long double log_sum_large(const OffspringLaw& h, long double log_n, int top, Rng& rng) {
  if (const auto a = h.alpha()) {
    // the largest `top` draws exactly via their tail values Gamma_i / n, the
    // remaining mass by its truncated mean
    long double acc = -std::numeric_limits<long double>::infinity();
    double gamma = 0.0;
    long double log_x = 0.0;
    for (int i = 1; i <= top; ++i) {
      gamma += rng.exponential();
      log_x = h.log_quantile_tail(std::log(static_cast<long double>(gamma)) - log_n);
      acc = log_add(acc, log_x);
    }
    const long double bulk = std::log(static_cast<long double>(gamma)) + log_x + std::log(*a / (1.0L - *a));
    return log_add(acc, bulk);
  }
  const double mu = h.mean();
  if (!(mu > 0.0)) return -std::numeric_limits<long double>::infinity();
  return log_n + std::log(static_cast<long double>(mu));
}

std::vector<double> one_trajectory(const OffspringLaw& h, double alpha, int max_gen, const DaviesOptions& opts,
                                   Rng& rng) {
  const long double ninf = -std::numeric_limits<long double>::infinity();
  const long double log_limit = std::log(static_cast<long double>(opts.exact_limit));
  std::vector<double> traj;
  traj.reserve(static_cast<std::size_t>(max_gen) + 1);
  long double log_z = 0.0L;  // Z_0 = 1
  for (int n = 0;; ++n) {
    // log(Z + 1)
    const long double l1 = log_z == ninf ? 0.0L : log_add(log_z, 0.0L);
    traj.push_back(static_cast<double>(std::pow(static_cast<long double>(alpha), n) * l1));
    if (n == max_gen) break;
    if (log_z == ninf) continue;
    if (log_z <= log_limit) {
      const auto z = static_cast<int64_t>(std::llround(std::exp(log_z)));
      long double acc = ninf;
      for (int64_t i = 0; i < z; ++i) acc = log_add(acc, log_draw(h, rng));
      log_z = acc;
    } else {
      log_z = log_sum_large(h, log_z, opts.top_order_stats, rng);
    }
    // counts are integers; keep small sums exact
    if (log_z != ninf && log_z < 40.0L) log_z = std::log(std::round(std::exp(log_z)));
  }
  return traj;
}

}  // namespace

bool trajectory_stabilized(const std::vector<double>& traj) {
  if (traj.size() < 3) return false;
  const auto last = traj.end() - 3;
  const auto [lo, hi] = std::minmax_element(last, traj.end());
  const double mean = (last[0] + last[1] + last[2]) / 3.0;
  return (*hi - *lo) < 0.1 * std::max(std::abs(mean), 0.05);
}

GrowthDiagnostic davies_growth_diagnostic(const OffspringLaw& h, double alpha, int trials, int max_gen,
                                          const DaviesOptions& opts) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (max_gen < 0) throw DomainError("max_gen must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (opts.top_order_stats < 1) throw DomainError("top_order_stats must be >= 1");
  GrowthDiagnostic out;
  out.trajectories.resize(static_cast<std::size_t>(trials));
  detail::parallel_for(trials, detail::resolve_threads(0), [&](int64_t i) {
    Rng rng(derive_seed(opts.seed, static_cast<uint64_t>(i)));
    out.trajectories[static_cast<std::size_t>(i)] = one_trajectory(h, alpha, max_gen, opts, rng);
  });
  int ok = 0;
  for (const auto& t : out.trajectories) {
    out.stabilized.push_back(trajectory_stabilized(t));
    ok += out.stabilized.back();
  }
  out.stabilized_fraction = static_cast<double>(ok) / trials;
  return out;
}

}  // namespace agebp
