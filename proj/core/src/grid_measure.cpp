#include "agebp/grid_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agebp/error.hpp"

namespace agebp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// log(F_hi - F_lo) from the logs of both.
double log_diff(double l_hi, double l_lo) {
  if (l_lo == kNegInf) return l_hi;
  if (!(l_hi > l_lo)) return kNegInf;
  return l_hi + std::log(-std::expm1(l_lo - l_hi));
}

}  // namespace

void LogAccumulator::add(double x) {
  if (x == kNegInf) return;
  if (x <= m_) {
    s_ += std::exp(x - m_);
  } else {
    s_ = s_ * std::exp(m_ - x) + 1.0;
    m_ = x;
  }
}

double LogAccumulator::value() const { return s_ > 0.0 ? m_ + std::log(s_) : kNegInf; }

GridMeasure GridMeasure::from_law(const AgeLaw& law, double dt, int64_t J) {
  if (!(dt > 0.0) || J < 0) throw DomainError("grid measure needs dt > 0 and J >= 0");
  const auto n = static_cast<std::size_t>(J) + 1;
  GridMeasure gm;
  gm.dt = dt;
  gm.atom0 = age_cdf(law, 0.0);
  gm.log_atom0 = safe_log(gm.atom0);
  gm.cells.assign(n, {});

  std::vector<double> atom_mass(n, 0.0);
  for (const auto& [pos, mass] : age_atoms(law)) {
    if (pos <= 0.0) continue;
    const auto i = static_cast<int64_t>(std::ceil(pos / dt - 1e-9));
    if (i < 1 || i > J) continue;
    const double theta = std::clamp((pos - static_cast<double>(i - 1) * dt) / dt, 0.0, 1.0);
    gm.cells[static_cast<std::size_t>(i)].push_back({mass, safe_log(mass), theta});
    atom_mass[static_cast<std::size_t>(i)] += mass;
  }
  double prev = gm.atom0;
  double lprev = gm.log_atom0;
  for (int64_t i = 1; i <= J; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double cur = age_cdf(law, t);
    const double lcur = age_log_cdf(law, t);
    const double am = atom_mass[static_cast<std::size_t>(i)];
    double cont, lcont;
    if (am > 0.0) {
      cont = std::max(0.0, (cur - prev) - am);
      lcont = safe_log(cont);
    } else {
      lcont = log_diff(lcur, lprev);
      cont = std::exp(lcont);
    }
    if (lcont > kNegInf) gm.cells[static_cast<std::size_t>(i)].push_back({cont, lcont, 0.5});
    prev = cur;
    lprev = lcur;
  }
  gm.a.assign(n, 0.0);
  gm.b.assign(n, 0.0);
  gm.log_a.assign(n, kNegInf);
  gm.log_b.assign(n, kNegInf);
  for (std::size_t i = 1; i < n; ++i) {
    LogAccumulator la, lb;
    for (const auto& p : gm.cells[i]) {
      gm.a[i] += p.mass * p.theta;
      gm.b[i] += p.mass * (1.0 - p.theta);
      if (p.theta > 0.0) la.add(p.log_mass + std::log(p.theta));
      if (p.theta < 1.0) lb.add(p.log_mass + std::log1p(-p.theta));
    }
    gm.log_a[i] = la.value();
    gm.log_b[i] = lb.value();
  }
  return gm;
}

double GridMeasure::cdf_at(int64_t j) const {
  double acc = atom0;
  for (int64_t i = 1; i <= j && i <= size(); ++i) acc += a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
  return acc;
}

GridMeasure GridMeasure::scaled(double c) const {
  GridMeasure out = *this;
  const double lc = safe_log(c);
  out.atom0 *= c;
  out.log_atom0 += lc;
  for (auto& cell : out.cells)
    for (auto& p : cell) {
      p.mass *= c;
      p.log_mass += lc;
    }
  for (auto& x : out.a) x *= c;
  for (auto& x : out.b) x *= c;
  for (auto& x : out.log_a) x += lc;
  for (auto& x : out.log_b) x += lc;
  return out;
}

double GridMeasure::full_sum(const std::vector<double>& eta, int64_t j) const {
  const double* e = eta.data();
  const double* pa = a.data();
  const double* pb = b.data();
  double acc = atom0 * e[j];
  for (int64_t i = 1; i <= j; ++i) acc += pa[i] * e[j - i] + pb[i] * e[j - i + 1];
  return acc;
}

double GridMeasure::log_full_sum(const std::vector<double>& log_eta, int64_t j) const {
  const double* e = log_eta.data();
  const double* pa = log_a.data();
  const double* pb = log_b.data();
  double m = log_atom0 + e[j];
  for (int64_t i = 1; i <= j; ++i) m = std::max(m, std::max(pa[i] + e[j - i], pb[i] + e[j - i + 1]));
  if (m == kNegInf) return kNegInf;
  double s = std::exp(log_atom0 + e[j] - m);
  for (int64_t i = 1; i <= j; ++i) s += std::exp(pa[i] + e[j - i] - m) + std::exp(pb[i] + e[j - i + 1] - m);
  return m + std::log(s);
}

void GridMeasure::log_prefix_sums(const std::vector<double>& log_eta, int64_t j, std::vector<double>& out) const {
  out.resize(static_cast<std::size_t>(j) + 1);
  const double* e = log_eta.data();
  LogAccumulator acc;
  acc.add(log_atom0 + e[j]);
  out[0] = acc.value();
  for (int64_t i = 1; i <= j; ++i) {
    acc.add(log_a[static_cast<std::size_t>(i)] + e[j - i]);
    acc.add(log_b[static_cast<std::size_t>(i)] + e[j - i + 1]);
    out[static_cast<std::size_t>(i)] = acc.value();
  }
}

}  // namespace agebp
