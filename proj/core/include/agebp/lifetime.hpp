#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "agebp/rng.hpp"

namespace agebp {

struct Exponential {
  double rate;
};

// exp(-ell / t^beta) up to t0 where it reaches 0.99, then linear to 1 on [t0, t0+1].
struct GreyFlat {
  double ell;
  double beta;
};

// exp(-exp(k / t^gamma)) up to t0 = k^(1/gamma) (value e^-e), then linear to 1
// on [t0, t0+1]. The closed form never exceeds e^-1, so it has to be cut early.
struct DoubleExpFlat {
  double k;
  double gamma;
};

struct Uniform {
  double a;
  double b;
};

struct Deterministic {
  double c;
};

// Piecewise CDF through knots (t_i, F_i). Between two knots with F > 0 the
// log of F is linear in t; otherwise F itself is. F = 0 before the first knot
// and 1 after the last.
struct TableCdf {
  std::vector<double> t;
  std::vector<double> log_f;
};

class LifetimeLaw {
 public:
  using Variant = std::variant<Exponential, GreyFlat, DoubleExpFlat, Uniform, Deterministic, TableCdf>;

  static LifetimeLaw exponential(double rate);
  static LifetimeLaw grey(double ell, double beta);
  static LifetimeLaw double_exp(double k, double gamma);
  static LifetimeLaw uniform(double a, double b);
  static LifetimeLaw deterministic(double c);
  static LifetimeLaw table(const std::vector<std::pair<double, double>>& knots);
  static LifetimeLaw table_from_log(const std::vector<std::pair<double, double>>& log_knots);

  const Variant& variant() const { return v_; }

  double cdf(double t) const;
  double cdf_left(double t) const;  // P(X < t)
  double log_cdf(double t) const;
  // inf{t >= 0 : G(t) >= u}.
  double inv_cdf(double u) const;
  // inv_cdf(exp(log_u)); stays exact for probabilities far below double range.
  double inv_cdf_log(double log_u) const;
  double sample(Rng& rng) const { return inv_cdf(rng.uniform()); }

  double median() const { return inv_cdf(0.5); }
  // Right end of the support, +inf if unbounded.
  double support_max() const;
  // Point masses (position, mass).
  std::vector<std::pair<double, double>> atoms() const;
  // Point where the flat extension starts, for the two small-t families.
  double cut_point() const;

 private:
  explicit LifetimeLaw(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace agebp
