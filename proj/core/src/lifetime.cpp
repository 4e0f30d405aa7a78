#include "agebp/lifetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agebp/error.hpp"

namespace agebp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGreyCut = 0.99;
const double kDoubleExpCut = std::exp(-std::exp(1.0));

double grey_t0(const GreyFlat& g) { return std::pow(g.ell / -std::log(kGreyCut), 1.0 / g.beta); }
double dexp_t0(const DoubleExpFlat& d) { return std::pow(d.k, 1.0 / d.gamma); }

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// Index of the segment (i-1, i] of the table containing t; 0 if t <= t_0.
std::size_t table_segment(const TableCdf& tab, double t) {
  return static_cast<std::size_t>(std::lower_bound(tab.t.begin(), tab.t.end(), t) - tab.t.begin());
}

double table_log_cdf(const TableCdf& tab, double t) {
  if (t < tab.t.front()) return -kInf;
  if (t >= tab.t.back()) return tab.log_f.back();
  const std::size_t i = table_segment(tab, t);
  if (tab.t[i] == t) return tab.log_f[i];
  const double w = (t - tab.t[i - 1]) / (tab.t[i] - tab.t[i - 1]);
  const double l0 = tab.log_f[i - 1], l1 = tab.log_f[i];
  if (std::isinf(l0)) return l1 + std::log(w);
  return l0 + w * (l1 - l0);
}

}  // namespace

LifetimeLaw LifetimeLaw::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential rate must be > 0");
  return LifetimeLaw(Exponential{rate});
}

LifetimeLaw LifetimeLaw::grey(double ell, double beta) {
  require(ell > 0.0 && beta > 0.0, "grey parameters must be > 0");
  return LifetimeLaw(GreyFlat{ell, beta});
}

LifetimeLaw LifetimeLaw::double_exp(double k, double gamma) {
  require(k > 0.0 && gamma > 0.0, "double-exponential parameters must be > 0");
  return LifetimeLaw(DoubleExpFlat{k, gamma});
}

LifetimeLaw LifetimeLaw::uniform(double a, double b) {
  require(a >= 0.0 && b > a && std::isfinite(b), "uniform needs 0 <= a < b");
  return LifetimeLaw(Uniform{a, b});
}

LifetimeLaw LifetimeLaw::deterministic(double c) {
  require(c >= 0.0 && std::isfinite(c), "deterministic value must be finite and >= 0");
  return LifetimeLaw(Deterministic{c});
}

LifetimeLaw LifetimeLaw::table(const std::vector<std::pair<double, double>>& knots) {
  std::vector<std::pair<double, double>> logs;
  logs.reserve(knots.size());
  for (const auto& [t, f] : knots) {
    require(f >= 0.0 && f <= 1.0, "table CDF values must lie in [0,1]");
    logs.emplace_back(t, f > 0.0 ? std::log(f) : -kInf);
  }
  return table_from_log(logs);
}

LifetimeLaw LifetimeLaw::table_from_log(const std::vector<std::pair<double, double>>& log_knots) {
  require(!log_knots.empty(), "table needs at least one knot");
  TableCdf tab;
  for (const auto& [t, lf] : log_knots) {
    require(t >= 0.0 && std::isfinite(t), "table times must be finite and >= 0");
    require(!(lf > 1e-12), "table CDF values must not exceed 1");
    if (!tab.t.empty()) {
      require(t > tab.t.back(), "table times must be strictly increasing");
      require(lf >= tab.log_f.back(), "table CDF must be non-decreasing");
    }
    tab.t.push_back(t);
    tab.log_f.push_back(std::min(lf, 0.0));
  }
  require(tab.log_f.back() > -1e-12, "table CDF must end at 1");
  tab.log_f.back() = 0.0;
  return LifetimeLaw(std::move(tab));
}

double LifetimeLaw::cdf(double t) const {
  if (std::isnan(t)) throw DomainError("cdf argument is NaN");
  if (t == kInf) return 1.0;
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return t <= 0.0 ? 0.0 : -std::expm1(-law.rate * t);
        } else if constexpr (std::is_same_v<T, GreyFlat>) {
          if (t <= 0.0) return 0.0;
          const double t0 = grey_t0(law);
          if (t <= t0) return std::exp(-law.ell * std::pow(t, -law.beta));
          return std::min(1.0, kGreyCut + (1.0 - kGreyCut) * (t - t0));
        } else if constexpr (std::is_same_v<T, DoubleExpFlat>) {
          if (t <= 0.0) return 0.0;
          const double t0 = dexp_t0(law);
          if (t <= t0) return std::exp(-std::exp(law.k * std::pow(t, -law.gamma)));
          return std::min(1.0, kDoubleExpCut + (1.0 - kDoubleExpCut) * (t - t0));
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return std::clamp((t - law.a) / (law.b - law.a), 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return t >= law.c ? 1.0 : 0.0;
        } else {
          return std::exp(table_log_cdf(law, t));
        }
      },
      v_);
}

double LifetimeLaw::cdf_left(double t) const {
  if (auto* d = std::get_if<Deterministic>(&v_)) return t > d->c ? 1.0 : 0.0;
  if (auto* tab = std::get_if<TableCdf>(&v_)) {
    if (t <= tab->t.front()) return 0.0;
  }
  return cdf(t);
}

double LifetimeLaw::log_cdf(double t) const {
  if (auto* g = std::get_if<GreyFlat>(&v_)) {
    if (t <= 0.0) return -kInf;
    if (t <= grey_t0(*g)) return -g->ell * std::pow(t, -g->beta);
  } else if (auto* d = std::get_if<DoubleExpFlat>(&v_)) {
    if (t <= 0.0) return -kInf;
    if (t <= dexp_t0(*d)) return -std::exp(d->k * std::pow(t, -d->gamma));
  } else if (auto* tab = std::get_if<TableCdf>(&v_)) {
    return table_log_cdf(*tab, t);
  }
  return std::log(cdf(t));
}

double LifetimeLaw::inv_cdf(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("inverse CDF level outside [0,1]");
  if (u == 0.0) {
    // inf{t >= 0 : G(t) >= 0}
    return 0.0;
  }
  return inv_cdf_log(std::log(u));
}

double LifetimeLaw::inv_cdf_log(double lu) const {
  if (std::isnan(lu)) throw DomainError("inverse CDF level is NaN");
  if (lu == -kInf) return 0.0;
  lu = std::min(lu, 0.0);
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          if (lu == 0.0) return kInf;
          if (lu < -0.6931471805599453) return -std::log1p(-std::exp(lu)) / law.rate;
          return -std::log(-std::expm1(lu)) / law.rate;
        } else if constexpr (std::is_same_v<T, GreyFlat>) {
          if (lu <= std::log(kGreyCut)) return std::pow(law.ell / -lu, 1.0 / law.beta);
          return grey_t0(law) + (std::exp(lu) - kGreyCut) / (1.0 - kGreyCut);
        } else if constexpr (std::is_same_v<T, DoubleExpFlat>) {
          if (lu <= -std::exp(1.0)) return std::pow(law.k / std::log(-lu), 1.0 / law.gamma);
          return dexp_t0(law) + (std::exp(lu) - kDoubleExpCut) / (1.0 - kDoubleExpCut);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return law.a + std::exp(lu) * (law.b - law.a);
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return law.c;
        } else {
          const auto it = std::lower_bound(law.log_f.begin(), law.log_f.end(), lu);
          const std::size_t i = static_cast<std::size_t>(it - law.log_f.begin());
          if (i == 0) return law.t.front();
          const double l0 = law.log_f[i - 1], l1 = law.log_f[i];
          const double dt = law.t[i] - law.t[i - 1];
          if (std::isinf(l0)) return law.t[i - 1] + std::exp(lu - l1) * dt;
          return law.t[i - 1] + (lu - l0) / (l1 - l0) * dt;
        }
      },
      v_);
}

double LifetimeLaw::support_max() const {
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Exponential>) return kInf;
        else if constexpr (std::is_same_v<T, GreyFlat>) return grey_t0(law) + 1.0;
        else if constexpr (std::is_same_v<T, DoubleExpFlat>) return dexp_t0(law) + 1.0;
        else if constexpr (std::is_same_v<T, Uniform>) return law.b;
        else if constexpr (std::is_same_v<T, Deterministic>) return law.c;
        else return law.t.back();
      },
      v_);
}

std::vector<std::pair<double, double>> LifetimeLaw::atoms() const {
  if (auto* d = std::get_if<Deterministic>(&v_)) return {{d->c, 1.0}};
  if (auto* tab = std::get_if<TableCdf>(&v_)) {
    if (tab->log_f.front() > -kInf) return {{tab->t.front(), std::exp(tab->log_f.front())}};
  }
  return {};
}

double LifetimeLaw::cut_point() const {
  if (auto* g = std::get_if<GreyFlat>(&v_)) return grey_t0(*g);
  if (auto* d = std::get_if<DoubleExpFlat>(&v_)) return dexp_t0(*d);
  return support_max();
}

}  // namespace agebp
