#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "agebp/rng.hpp"

namespace agebp {

// h(s) = 1 - (1-s)^alpha.
struct HeavyTailAlpha {
  double alpha;
};

// h(s) = 1 - (1-s)^alpha * (log 1/(1-s))^beta near s = 1, flattened below the
// point where that expression stops being increasing.
struct LogCorrectedAlpha {
  double alpha;
  double beta;
};

struct FiniteSupport {
  std::vector<std::pair<int64_t, double>> pmf;
};

struct PlumpReport {
  bool is_plump = false;
  double epsilon = 0.0;
  double m0 = 0.0;
};

class OffspringLaw {
 public:
  using Variant = std::variant<HeavyTailAlpha, LogCorrectedAlpha, FiniteSupport>;

  static OffspringLaw heavy_tail(double alpha);
  static OffspringLaw log_corrected(double alpha, double beta);
  static OffspringLaw finite(std::vector<std::pair<int64_t, double>> pmf);

  const Variant& variant() const { return v_; }
  // Tail exponent for the two power-law families.
  std::optional<double> alpha() const;
  bool is_heavy_tail_alpha() const { return std::holds_alternative<HeavyTailAlpha>(v_); }

  double pgf(double s) const;
  // 1 - h(1 - y); the solvers work with this to keep digits near s = 1.
  double pgf_complement(double y) const;
  // log(1 - h(1 - exp(log_y))), usable when y is far below double range.
  double log_pgf_complement(double log_y) const;

  double pmf(int64_t n) const;
  // P(D > k) for real k >= 0 (k is rounded down).
  double tail(double k) const;
  long double log_tail(long double k) const;
  double cdf(int64_t k) const { return 1.0 - tail(static_cast<double>(k)); }

  // min{k in support : F(k) >= u}.
  int64_t quantile(double u) const;
  // Smallest k with P(D > k) <= v, as a double (may exceed the int64 range).
  double quantile_tail(double v) const;
  // log of quantile_tail(exp(log_v)) for the power-law families; usable far
  // beyond double range.
  long double log_quantile_tail(long double log_v) const;

  // Inverse transform on a (0,1] tail uniform; saturates at INT64_MAX.
  int64_t sample(Rng& rng) const;
  double sample_real(Rng& rng) const;

  double mean() const;  // +inf for the power-law families

 private:
  explicit OffspringLaw(Variant v) : v_(std::move(v)) {}
  double log_corrected_cut() const;
  long double asymptotic_log_quantile_tail(long double log_v) const;  // y* below which the closed form is used
  Variant v_;
  std::vector<double> tails_;  // FiniteSupport: P(D > k_i) per support point
};

PlumpReport check_plump(const OffspringLaw& law);

}  // namespace agebp
