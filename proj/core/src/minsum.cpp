#include "agebp/minsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agebp/error.hpp"

namespace agebp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const long double kLogBig = std::log(1.0e300L);

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid - 1), v.end());
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

}  // namespace

double GrowthSequence::value(int n) const {
  const long double l = log_values.at(static_cast<std::size_t>(n));
  return l > 709.0L ? kInf : static_cast<double>(std::exp(l));
}

const char* to_string(MinSumMethod m) {
  switch (m) {
    case MinSumMethod::ClosedForm: return "closed_form";
    case MinSumMethod::RatioHeuristic: return "ratio_heuristic";
    default: return "monte_carlo";
  }
}

nlohmann::json MinSumReport::to_json() const {
  nlohmann::json j;
  j["terms"] = terms;
  j["partial_sums"] = partial_sums;
  j["verdict"] = to_string(verdict);
  j["method"] = to_string(method);
  if (!note.empty()) j["note"] = note;
  return j;
}

GrowthSequence growth_sequence(const OffspringLaw& h, double m0, int N) {
  if (!(m0 >= 1.0)) throw DomainError("m0 must be >= 1");
  if (N < 0 || N > 60) throw DomainError("N must lie in [0, 60]");
  GrowthSequence f;
  f.m0 = m0;
  f.heavy_tail_alpha = h.is_heavy_tail_alpha();
  f.alpha = h.alpha();
  f.log_values.push_back(std::log((long double)m0));
  for (int n = 0; n < N; ++n) {
    const long double lf = f.log_values.back();
    long double next;
    if (lf < kLogBig) {
      const double q = h.quantile_tail(static_cast<double>(std::exp(-lf)));
      if (std::isfinite(q) && q < 1.0e300) {
        next = q > 0.0 ? std::log((long double)q) : -std::numeric_limits<long double>::infinity();
      } else {
        if (!f.alpha) throw QuantileOverflow("quantile left double range and the law has no asymptotic inverse");
        next = h.log_quantile_tail(-lf);
        if (f.asymptotic_from < 0) f.asymptotic_from = n + 1;
      }
    } else {
      if (!f.alpha) throw QuantileOverflow("quantile left double range and the law has no asymptotic inverse");
      next = h.log_quantile_tail(-lf);
      if (f.asymptotic_from < 0) f.asymptotic_from = n + 1;
    }
    if (!std::isfinite(static_cast<double>(next)) && next > 0) throw QuantileOverflow("growth sequence overflowed");
    if (!(next > lf)) f.strictly_increasing = false;
    f.log_values.push_back(next);
  }
  if (f.alpha) {
    long double lo = std::numeric_limits<long double>::infinity(), hi = -lo;
    long double an = 1.0L;
    for (const long double l : f.log_values) {
      lo = std::min(lo, an * l);
      hi = std::max(hi, an * l);
      an *= *f.alpha;
    }
    f.log_m_lower = static_cast<double>(lo);
    f.log_m_upper = static_cast<double>(hi);
  }
  return f;
}

MinSumReport minsum_series(const LifetimeLaw& G, const GrowthSequence& f) {
  MinSumReport rep;
  double acc = 0.0;
  for (const long double lf : f.log_values) {
    const double a = G.inv_cdf_log(static_cast<double>(-lf));
    rep.terms.push_back(a);
    acc += a;
    rep.partial_sums.push_back(acc);
  }
  if (!f.strictly_increasing) {
    rep.method = MinSumMethod::RatioHeuristic;
    rep.verdict = Verdict::Inconclusive;
    rep.note = "growth sequence is not strictly increasing";
    return rep;
  }
  if (f.heavy_tail_alpha) {
    if (std::holds_alternative<GreyFlat>(G.variant())) {
      // terms ~ (ell / log f(n))^(1/beta), geometric in n
      rep.method = MinSumMethod::ClosedForm;
      rep.verdict = Verdict::Explosive;
      return rep;
    }
    if (const auto* d = std::get_if<DoubleExpFlat>(&G.variant())) {
      // terms ~ (k / (n log(1/alpha)))^(1/gamma)
      rep.method = MinSumMethod::ClosedForm;
      rep.verdict = d->gamma < 1.0 ? Verdict::Explosive : Verdict::Conservative;
      return rep;
    }
  }
  rep.method = MinSumMethod::RatioHeuristic;
  constexpr int kWindow = 10;
  constexpr double kRatio = 0.95;
  const int n = static_cast<int>(rep.terms.size());
  if (n < kWindow + 1) {
    rep.note = "too few terms for the ratio test";
    return rep;
  }
  bool ratio_ok = true;
  for (int i = n - kWindow; i < n; ++i) ratio_ok = ratio_ok && rep.terms[i] <= kRatio * rep.terms[i - 1];
  if (ratio_ok) {
    rep.verdict = Verdict::Explosive;
    return rep;
  }
  bool harmonic = true;
  for (int i = n - kWindow; i < n; ++i) {
    const double cur = i * rep.terms[i], prev = (i - 1) * rep.terms[i - 1];
    harmonic = harmonic && cur > 0.0 && cur >= prev * (1.0 - 1e-9);
  }
  rep.verdict = harmonic ? Verdict::Conservative : Verdict::Inconclusive;
  return rep;
}

MinSumReport classify_minsum(const OffspringLaw& h, const LifetimeLaw& G, const MinSumOptions& opts) {
  const PlumpReport plump = check_plump(h);
  if (!plump.is_plump) {
    MinSumReport rep;
    rep.note = "offspring law failed the plumpness check";
    return rep;
  }
  const double m0 = opts.m0_override.value_or(2.0 * plump.m0);
  return minsum_series(G, growth_sequence(h, m0, opts.N));
}

AlphaScan alpha_invariance_scan(const LifetimeLaw& G, const std::vector<double>& alphas, const MinSumOptions& opts) {
  AlphaScan scan;
  bool exp_seen = false, cons_seen = false;
  for (const double a : alphas) {
    const Verdict v = classify_minsum(OffspringLaw::heavy_tail(a), G, opts).verdict;
    scan.alphas.push_back(a);
    scan.verdicts.push_back(v);
    exp_seen = exp_seen || v == Verdict::Explosive;
    cons_seen = cons_seen || v == Verdict::Conservative;
  }
  scan.violation = exp_seen && cons_seen;
  return scan;
}

double sample_min_shortcut(const LifetimeLaw& G, double log_M, Rng& rng) {
  const double u = rng.uniform();
  if (u == 0.0) return G.inv_cdf(0.0);
  const double l1p = std::log1p(-u);
  double log_level;
  if (log_M < 700.0) {
    log_level = std::log(-std::expm1(l1p / std::exp(log_M)));
  } else {
    log_level = std::log(-l1p) - log_M;
  }
  return G.inv_cdf_log(log_level);
}

MinSumReport minsum_monte_carlo(double alpha, const LifetimeLaw& G, const MonteCarloOptions& opts) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  if (opts.N < 2 || opts.N > 40) throw DomainError("N must lie in [2, 40]");
  if (opts.trials < 100) throw DomainError("trials must be >= 100");
  const int N = opts.N;
  std::vector<double> log_M(static_cast<std::size_t>(N) + 1);
  for (int n = 1; n <= N; ++n) {
    const double l = std::pow(alpha, -static_cast<double>(n));
    log_M[static_cast<std::size_t>(n)] = l < 30.0 ? std::log(std::max(1.0, std::round(std::exp(l)))) : l;
  }
  std::vector<std::vector<double>> incr(static_cast<std::size_t>(N) + 1);
  std::vector<double> tails;
  for (int i = 0; i < opts.trials; ++i) {
    Rng rng(derive_seed(opts.seed, static_cast<uint64_t>(i)));
    double s = 0.0, s_half = 0.0;
    for (int n = 1; n <= N; ++n) {
      const double a = sample_min_shortcut(G, log_M[static_cast<std::size_t>(n)], rng);
      incr[static_cast<std::size_t>(n)].push_back(a);
      s += a;
      if (n == N / 2) s_half = s;
    }
    tails.push_back(s - s_half);
  }
  MinSumReport rep;
  rep.method = MinSumMethod::MonteCarlo;
  double acc = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double m = median_of(incr[static_cast<std::size_t>(n)]);
    rep.terms.push_back(m);
    acc += m;
    rep.partial_sums.push_back(acc);
  }
  if (median_of(tails) < opts.tail_tol) {
    rep.verdict = Verdict::Explosive;
    return rep;
  }
  // decay exponent p of the median increments, a_n ~ n^-p, over the second half
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int n = N / 2; n <= N; ++n) {
    const double a = rep.terms[static_cast<std::size_t>(n - 1)];
    if (!(a > 0.0)) continue;
    const double x = std::log(static_cast<double>(n)), y = std::log(a);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) {
    rep.note = "too few positive increments for a decay fit";
    return rep;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  const double p = -slope;
  rep.note = "decay exponent " + std::to_string(p);
  if (p >= 1.5) rep.verdict = Verdict::Explosive;
  else if (p <= 1.1) rep.verdict = Verdict::Conservative;
  return rep;
}

}  // namespace agebp
