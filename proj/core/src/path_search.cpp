#include "agebp/path_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agebp/error.hpp"
#include "agebp/special.hpp"

namespace agebp {

namespace {

constexpr long double kLogExact = 40.0L;  // below this, counts are handled as doubles

struct Stepper {
  const ForwardIncubation& spec;
  const PathSearchOptions& opts;
  Rng& rng;
  bool memoryless;

  // X - tau given X >= tau
  double excess(double tau) {
    if (memoryless) return spec.G.sample(rng);
    const double g0 = spec.G.cdf_left(tau);
    if (1.0 - g0 >= 0.01) {
      for (;;) {
        const double x = spec.G.sample(rng);
        if (x >= tau) return x - tau;
      }
    }
    return std::max(0.0, spec.G.inv_cdf(g0 + rng.uniform() * (1.0 - g0)) - tau);
  }

  // inverse of the excess law at probability exp(log_p)
  // argmin over W options of (excess, incubation) by their sum
  std::pair<double, double> best_option(double tau, long double log_w) {
    if (log_w <= std::log(static_cast<long double>(opts.enumerate_limit))) {
      const auto w = static_cast<int64_t>(std::floor(std::exp(log_w) + 1e-9));
      std::pair<double, double> best{std::numeric_limits<double>::infinity(), 0.0};
      for (int64_t i = 0; i < std::max<int64_t>(w, 1); ++i) {
        const double e = excess(tau);
        const double s = spec.I.sample(rng);
        if (e + s < best.first + best.second) best = {e, s};
      }
      return best;
    }
    return min_by_convolution(tau, log_w);
  }

  double log_excess_cdf(double tau, double x) const {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    if (memoryless) return spec.G.log_cdf(x);
    const double g0 = spec.G.cdf_left(tau);
    if (g0 == 0.0) return spec.G.log_cdf(tau + x);
    const double d = (spec.G.cdf(tau + x) - g0) / (1.0 - g0);
    return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
  }

  // bins of the incubation law on [0, z], refined toward both ends
  std::vector<double> nodes(double z) const {
    std::vector<double> s{0.0, z};
    for (int k = 0; k < 48; ++k) {
      const double g = 0.5 * std::pow(1e-12, k / 47.0);
      s.push_back(z * g);
      s.push_back(z - z * g);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  static double log_diff(double la, double lb) {
    if (!(la > lb)) return -std::numeric_limits<double>::infinity();
    return la + std::log(-std::expm1(lb - la));
  }

  // log P(E + I <= z); bin masses of I times E's cdf at the bin midpoint
  double log_sum_cdf(double tau, double z) const {
    const auto s = nodes(z);
    long double acc = -std::numeric_limits<long double>::infinity();
    acc = log_add(acc, spec.I.log_cdf(0.0) + log_excess_cdf(tau, z));
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      const double lm = log_diff(spec.I.log_cdf(s[j + 1]), spec.I.log_cdf(s[j]));
      acc = log_add(acc, lm + log_excess_cdf(tau, z - 0.5 * (s[j] + s[j + 1])));
    }
    return static_cast<double>(acc);
  }

  // log density of E at x by a central difference in logs
  double log_excess_pdf(double tau, double x) const {
    const double h = 1e-4 * x;
    return log_diff(log_excess_cdf(tau, x + h), log_excess_cdf(tau, x - h)) - std::log(2.0 * h);
  }

  // Minimum of W sums sampled through its cdf 1 - (1 - F)^W, then split
  // between the two parts by the conditional law of I given the sum.
  std::pair<double, double> min_by_convolution(double tau, long double log_w) {
    const double u = rng.uniform();
    const double target = static_cast<double>(std::log(-std::log1p(-u) + 0.0L) - log_w);
    constexpr double kTiny = 1e-300;
    if (target <= log_sum_cdf(tau, kTiny)) return {0.0, 0.0};
    double lo = std::log(kTiny), hi = 0.0;
    while (log_sum_cdf(tau, std::exp(hi)) < target && hi < 700.0) hi += 1.0;
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_sum_cdf(tau, std::exp(mid)) < target ? lo : hi) = mid;
    }
    const double z = std::exp(hi);
    const auto s = nodes(z);
    std::vector<double> logw;
    std::vector<std::pair<double, double>> bins;
    logw.push_back(spec.I.log_cdf(0.0) + log_excess_pdf(tau, z));
    bins.emplace_back(0.0, 0.0);
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      const double mid = 0.5 * (s[j] + s[j + 1]);
      logw.push_back(log_diff(spec.I.log_cdf(s[j + 1]), spec.I.log_cdf(s[j])) + log_excess_pdf(tau, z - mid));
      bins.emplace_back(s[j], s[j + 1]);
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(top)) return {z, 0.0};
    double total = 0.0;
    for (double& w : logw) total += (w = std::exp(w - top));
    double pick = rng.uniform() * total;
    std::size_t j = 0;
    while (j + 1 < logw.size() && pick >= logw[j]) pick -= logw[j++];
    const double inc = bins[j].first + rng.uniform() * (bins[j].second - bins[j].first);
    return {std::max(0.0, z - inc), inc};
  }
};

// log of Bin(exp(log_n), p)
long double log_binomial(Rng& rng, long double log_n, double p) {
  if (log_n < kLogExact) {
    const double k = binomial(rng, std::round(std::exp(static_cast<double>(log_n))), p);
    return k > 0.0 ? std::log(static_cast<long double>(k)) : -std::numeric_limits<long double>::infinity();
  }
  const long double mean = log_n + std::log(static_cast<long double>(p));
  const long double rel = std::sqrt((1.0L - p) / (p * std::exp(std::min(mean, 11000.0L))));
  return mean + std::log1p(std::max(-0.5L, rel * rng.normal()));
}

// log of the tail value of the r-th largest of n draws: Beta(r, n - r + 1)
long double log_order_tail(Rng& rng, long double log_r, long double log_n) {
  if (log_n < kLogExact) {
    const double r = std::round(std::exp(static_cast<double>(log_r)));
    const double n = std::round(std::exp(static_cast<double>(log_n)));
    const double a = gamma_draw(rng, r);
    const double b = gamma_draw(rng, n - r + 1.0);
    return std::log(static_cast<long double>(a)) - std::log(static_cast<long double>(a + b));
  }
  long double log_gamma_r;
  if (log_r < kLogExact) {
    log_gamma_r = std::log(static_cast<long double>(gamma_draw(rng, std::round(std::exp(static_cast<double>(log_r))))));
  } else {
    log_gamma_r = log_r + std::log1p(std::max(-0.5L, rng.normal() * std::exp(-0.5L * log_r)));
  }
  return log_gamma_r - log_n;
}

}  // namespace

nlohmann::json PathSearchResult::to_json() const {
  nlohmann::json j{{"success", success}, {"path_partial_sums", path_partial_sums}};
  j["failure_generation"] = failure_generation ? nlohmann::json(*failure_generation) : nlohmann::json(nullptr);
  return j;
}

PathSearchResult exploding_path_search(const ForwardIncubation& spec, double delta, double m, int max_gen, Rng& rng,
                                       const PathSearchOptions& opts) {
  if (!spec.h.is_heavy_tail_alpha()) throw DomainError("path search needs a heavy-tailed offspring law");
  if (max_gen < 0) throw DomainError("max_gen must be >= 0");
  if (!(delta >= 0.0)) throw DomainError("delta must be >= 0");
  if (spec.I.cdf(delta) < 1.0 - 1e-12) throw DomainError("incubation law must satisfy I(delta) = 1");
  const double alpha = *spec.h.alpha();
  const double s = std::sqrt(alpha);
  const double c = 0.5 * (1.0 - spec.G.cdf(delta));
  if (!(m > 1.0) || !(c > 0.0) || c * std::pow(m, 1.0 - s) / 8.0 < std::exp(1.0))
    throw DomainError("m too small: need c m^(1 - sqrt(alpha)) / 8 >= e");

  PathSearchResult res;
  if (max_gen == 0) {
    res.success = true;
    return res;
  }
  Stepper step{spec, opts, rng, std::holds_alternative<Exponential>(spec.G.variant())};
  const long double log_m = std::log(static_cast<long double>(m));
  const long double log_c = std::log(static_cast<long double>(c));
  auto log_f = [&](int n) { return log_m / std::pow(static_cast<long double>(s), n); };
  auto fail = [&](int n, const char* why) {
    if (opts.throw_on_failure) throw TerminatedInFailure(n, why);
    res.failure_generation = n;
    return res;
  };

  // the root is drawn on the event D_0 >= f(0)
  const long double f0 = std::exp(log_f(0));
  long double log_d = spec.h.log_quantile_tail(std::log(static_cast<long double>(rng.uniform_pos())) +
                                               spec.h.log_tail(std::ceil(f0) - 1.0L));
  double tau = spec.I.sample(rng);
  double sum = 0.0;
  for (int n = 0; n < max_gen; ++n) {
    if (log_d < log_f(n)) return fail(n, "too few offspring");
    const double alive_p = 1.0 - spec.G.cdf_left(tau);
    const long double log_alive = log_binomial(rng, log_d, alive_p);
    if (log_alive < log_c + log_f(n)) return fail(n, "too few children outlive the incubation period");
    long double log_w = log_c + (1.0L - s) * log_f(n) - std::log(2.0L);
    if (log_w < kLogExact) log_w = std::log(std::max(1.0L, std::floor(std::exp(log_w))));
    // lifetimes are independent of offspring counts, so the chosen option has a
    // uniform rank among the W options
    long double log_r = std::log(static_cast<long double>(rng.uniform_pos())) + log_w;
    if (log_w < kLogExact) log_r = std::log(std::ceil(std::exp(log_r)));
    log_d = spec.h.log_quantile_tail(log_order_tail(rng, log_r, log_alive));
    const auto [e, next_tau] = step.best_option(tau, log_w);
    sum += tau + e;
    res.path_partial_sums.push_back(sum);
    tau = next_tau;
  }
  res.success = true;
  return res;
}

}  // namespace agebp
