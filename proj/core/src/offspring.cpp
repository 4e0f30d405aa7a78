#include "agebp/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "agebp/error.hpp"
#include "agebp/special.hpp"

namespace agebp {

namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxCount = 1.0e300;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

// Smallest integer k >= 0 with sat(k), for a predicate that is monotone in k.
// Gallops away from `guess` then bisects. Returns +inf past kMaxCount.
template <class Pred>
double monotone_search(double guess, Pred sat) {
  if (sat(0.0)) return 0.0;
  double g = std::floor(std::clamp(guess, 1.0, kMaxCount));
  double lo, hi;
  if (sat(g)) {
    hi = g;
    double step = 1.0;
    lo = std::max(0.0, g - step);
    while (lo > 0.0 && sat(lo)) {
      hi = lo;
      step *= 2.0;
      lo = std::max(0.0, std::floor(g - step));
    }
  } else {
    lo = g;
    double step = 1.0;
    hi = g + step;
    while (!sat(hi)) {
      lo = hi;
      step *= 2.0;
      hi = std::floor(g + step);
      if (hi > kMaxCount) return kInf;
    }
  }
  // invariant: !sat(lo), sat(hi)
  while (hi - lo > 1.0 && hi - lo > hi * 4e-16) {
    const double mid = std::floor(lo + (hi - lo) / 2.0);
    if (mid <= lo || mid >= hi) break;
    if (sat(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace

OffspringLaw OffspringLaw::heavy_tail(double alpha) {
  check_alpha(alpha);
  return OffspringLaw(HeavyTailAlpha{alpha});
}

OffspringLaw OffspringLaw::log_corrected(double alpha, double beta) {
  check_alpha(alpha);
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
  return OffspringLaw(LogCorrectedAlpha{alpha, beta});
}

OffspringLaw OffspringLaw::finite(std::vector<std::pair<int64_t, double>> pmf) {
  std::map<int64_t, double> merged;
  double total = 0.0;
  for (const auto& [k, p] : pmf) {
    if (k < 0) throw DomainError("finite support points must be >= 0");
    if (!(p >= 0.0)) throw DomainError("finite support probabilities must be >= 0");
    merged[k] += p;
    total += p;
  }
  if (merged.empty() || std::abs(total - 1.0) > 1e-12) throw DomainError("finite pmf must sum to 1");
  FiniteSupport fs;
  for (const auto& [k, p] : merged)
    if (p > 0.0) fs.pmf.emplace_back(k, p);
  OffspringLaw law(std::move(fs));
  const auto& pts = std::get<FiniteSupport>(law.v_).pmf;
  law.tails_.resize(pts.size());
  double acc = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    law.tails_[i] = acc;
    acc += pts[i].second;
  }
  return law;
}

std::optional<double> OffspringLaw::alpha() const {
  if (auto* h = std::get_if<HeavyTailAlpha>(&v_)) return h->alpha;
  if (auto* l = std::get_if<LogCorrectedAlpha>(&v_)) return l->alpha;
  return std::nullopt;
}

double OffspringLaw::log_corrected_cut() const {
  const auto& l = std::get<LogCorrectedAlpha>(v_);
  return std::exp(-l.beta / l.alpha);
}

double OffspringLaw::pgf_complement(double y) const {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("pgf argument outside [0,1]");
  if (y == 0.0) return 0.0;
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, HeavyTailAlpha>) {
          return std::pow(y, law.alpha);
        } else if constexpr (std::is_same_v<T, LogCorrectedAlpha>) {
          const double z = std::min(y, log_corrected_cut());
          if (law.beta == 0.0) return std::pow(z, law.alpha);
          return std::pow(z, law.alpha) * std::pow(-std::log(z), law.beta);
        } else {
          const double l1p = std::log1p(-y);
          double acc = 0.0;
          for (const auto& [k, p] : law.pmf) {
            if (k == 0) continue;
            acc += p * (y == 1.0 ? 1.0 : -std::expm1(static_cast<double>(k) * l1p));
          }
          return std::min(acc, 1.0);
        }
      },
      v_);
}

double OffspringLaw::log_pgf_complement(double ly) const {
  if (std::isnan(ly)) throw DomainError("pgf argument is NaN");
  ly = std::min(ly, 0.0);
  if (ly == -static_cast<double>(kInf)) return -kInf;
  if (auto* h = std::get_if<HeavyTailAlpha>(&v_)) return h->alpha * ly;
  if (auto* l = std::get_if<LogCorrectedAlpha>(&v_)) {
    const double z = std::min(ly, -l->beta / l->alpha);
    return l->alpha * z + (l->beta > 0.0 ? l->beta * std::log(-z) : 0.0);
  }
  if (ly > -30.0) return std::log(pgf_complement(std::exp(ly)));
  // 1 - (1-y)^k = k y (1 + O(k y)) for tiny y
  const double m = mean();
  return m > 0.0 ? std::log(m) + ly : -kInf;
}

double OffspringLaw::pgf(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("pgf argument outside [0,1]");
  if (auto* fs = std::get_if<FiniteSupport>(&v_)) {
    double acc = 0.0;
    for (const auto& [k, p] : fs->pmf) acc += p * std::pow(s, static_cast<double>(k));
    return acc;
  }
  return 1.0 - pgf_complement(1.0 - s);
}

long double OffspringLaw::log_tail(long double k) const {
  if (k < 0.0L) return 0.0L;
  k = std::floor(k);
  return std::visit(
      [&](const auto& law) -> long double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, HeavyTailAlpha>) {
          return log_gamma_ratio(k + 1.0L, law.alpha) - std::lgamma(1.0L - law.alpha);
        } else if constexpr (std::is_same_v<T, LogCorrectedAlpha>) {
          const long double top = std::log1p(-(long double)pgf(0.0));  // log P(D > 0)
          if (k == 0.0L) return top;
          const long double x = std::max(k + 1.0L, std::exp((long double)law.beta / law.alpha));
          const long double lx = std::log(x);
          long double v = -law.alpha * lx - std::lgamma(1.0L - law.alpha);
          if (law.beta > 0.0) v += law.beta * std::log(lx);
          return std::min(v, top);
        } else {
          const auto& pts = law.pmf;
          auto it = std::upper_bound(pts.begin(), pts.end(), k,
                                     [](long double kk, const auto& e) { return kk < (long double)e.first; });
          if (it == pts.begin()) return 0.0L;
          const double t = tails_[static_cast<std::size_t>(it - pts.begin()) - 1];
          return t > 0.0 ? std::log((long double)t) : kNegInf;
        }
      },
      v_);
}

double OffspringLaw::tail(double k) const { return static_cast<double>(std::exp(log_tail(k))); }

double OffspringLaw::pmf(int64_t n) const {
  if (n < 0) return 0.0;
  if (auto* h = std::get_if<HeavyTailAlpha>(&v_)) {
    if (n == 0) return 0.0;
    const long double lr = log_gamma_ratio((long double)n + 1.0L, 1.0L + h->alpha);
    return static_cast<double>(h->alpha / std::tgamma(1.0L - h->alpha) * std::exp(lr));
  }
  if (auto* fs = std::get_if<FiniteSupport>(&v_)) {
    for (const auto& [k, p] : fs->pmf)
      if (k == n) return p;
    return 0.0;
  }
  if (n == 0) return pgf(0.0);
  return tail(static_cast<double>(n - 1)) - tail(static_cast<double>(n));
}

double OffspringLaw::quantile_tail(double v) const {
  if (v >= 1.0) return 0.0;
  if (v <= 0.0) return kInf;
  if (auto* fs = std::get_if<FiniteSupport>(&v_)) {
    for (std::size_t i = 0; i < fs->pmf.size(); ++i)
      if (tails_[i] <= v) return static_cast<double>(fs->pmf[i].first);
    return static_cast<double>(fs->pmf.back().first);
  }
  if (const auto* ht = std::get_if<HeavyTailAlpha>(&v_)) {
    // most draws are small: walk S(k) = S(k-1) (k - alpha) / k upward
    long double t = 1.0L;
    for (int k = 1; k <= 64; ++k) {
      t *= (k - ht->alpha) / k;
      if (t <= v) return k;
    }
  }
  const long double lv = std::log((long double)v);
  const double guess = static_cast<double>(std::exp(std::min(asymptotic_log_quantile_tail(lv), 700.0L)));
  return monotone_search(guess, [&](double k) { return log_tail(k) <= lv; });
}

long double OffspringLaw::asymptotic_log_quantile_tail(long double log_v) const {
  return std::visit(
      [&](const auto& law) -> long double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          return 0.0L;
        } else {
          const long double c = std::lgamma(1.0L - law.alpha);
          long double L = -(log_v + c) / law.alpha;
          if constexpr (std::is_same_v<T, LogCorrectedAlpha>) {
            for (int it = 0; it < 8 && law.beta > 0.0; ++it)
              L = (law.beta * std::log(std::max(L, 1.0L)) - c - log_v) / law.alpha;
          }
          return L;
        }
      },
      v_);
}

long double OffspringLaw::log_quantile_tail(long double log_v) const {
  if (log_v >= 0.0L) return kNegInf;
  // exact search while the answer fits in a double
  if (log_v > -690.0L || std::holds_alternative<FiniteSupport>(v_)) {
    const double q = quantile_tail(static_cast<double>(std::exp(log_v)));
    if (std::isfinite(q)) return q > 0.0 ? std::log((long double)q) : kNegInf;
  }
  return asymptotic_log_quantile_tail(log_v);
}

int64_t OffspringLaw::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("quantile level outside [0,1)");
  double k;
  if (u == 0.0) {
    // left end of the support
    k = monotone_search(1.0, [&](double kk) { return log_tail(kk) < 0.0L; });
  } else {
    const double guess = quantile_tail(1.0 - u);
    k = monotone_search(std::isfinite(guess) ? guess : kMaxCount,
                        [&](double kk) { return 1.0 - tail(kk) >= u; });
  }
  if (!(k < 9.2e18)) return std::numeric_limits<int64_t>::max();
  return static_cast<int64_t>(k);
}

double OffspringLaw::sample_real(Rng& rng) const { return quantile_tail(rng.uniform_pos()); }

int64_t OffspringLaw::sample(Rng& rng) const {
  const double k = sample_real(rng);
  if (!(k < 9.2e18)) return std::numeric_limits<int64_t>::max();
  return static_cast<int64_t>(k);
}

double OffspringLaw::mean() const {
  if (auto* fs = std::get_if<FiniteSupport>(&v_)) {
    double m = 0.0;
    for (const auto& [k, p] : fs->pmf) m += static_cast<double>(k) * p;
    return m;
  }
  return kInf;
}

PlumpReport check_plump(const OffspringLaw& law) {
  PlumpReport rep;
  if (std::holds_alternative<FiniteSupport>(law.variant())) return rep;
  constexpr int kGrid = 200;
  constexpr double kLo = 2.0, kHi = 1.0e6;
  std::vector<double> ms(kGrid);
  for (int i = 0; i < kGrid; ++i) ms[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kGrid - 1));
  double eps = 1.0;
  for (int e = 0; e <= 10; ++e, eps *= 0.5) {
    int first_ok = kGrid;
    for (int i = kGrid - 1; i >= 0; --i) {
      const double x = std::pow(ms[i], 1.0 + eps);
      // P(D >= x) = P(D > ceil(x) - 1)
      const bool ok = law.log_tail(std::ceil(x) - 1.0) >= -std::log((long double)ms[i]);
      if (!ok) break;
      first_ok = i;
    }
    // demand the inequality over at least the top decade of the tested range
    if (first_ok < kGrid && ms[first_ok] <= kHi / 10.0) {
      rep.is_plump = true;
      rep.epsilon = eps;
      rep.m0 = std::ceil(ms[first_ok]);
      return rep;
    }
  }
  return rep;
}

}  // namespace agebp
