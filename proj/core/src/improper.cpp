#include "agebp/improper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agebp/error.hpp"

namespace agebp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;
// below this F is tracked through logs of G
constexpr double kTiny = 1e-280;

double log_add2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_diff(double l_hi, double l_lo) {
  if (l_lo == kNegInf) return l_hi;
  if (!(l_hi > l_lo)) return kNegInf;
  return l_hi + std::log(-std::expm1(l_lo - l_hi));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }
}

ImproperLaw ImproperLaw::thin(const LifetimeLaw& base, const LifetimeLaw& kernel_law, ThinKind kind,
                              const ThinOptions& opts) {
  if (opts.cells < 1) throw DomainError("thinning needs at least one cell");
  ImproperLaw law(base, kernel_law, kind);
  double H = opts.horizon_medians * base.median();
  // bounded support: spend every cell where G has mass
  if (std::isfinite(base.support_max())) H = base.support_max();
  if (!(H > 0.0)) H = 1.0;

  std::vector<double> nodes(opts.cells + 1);
  for (std::size_t i = 0; i <= opts.cells; ++i)
    nodes[i] = H * static_cast<double>(i) / static_cast<double>(opts.cells);
  nodes.back() = H;
  // breakpoints: jumps of the kernel and atoms of G sit exactly on nodes
  for (const auto& atoms : {kernel_law.atoms(), base.atoms()})
    for (const auto& [pos, mass] : atoms)
      if (pos > 0.0 && pos < H) nodes.push_back(pos);
  // kinks at the ends of bounded supports
  for (double pos : {base.support_max(), kernel_law.support_max()})
    if (pos > 0.0 && pos < H) nodes.push_back(pos);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const std::size_t n = nodes.size();
  law.nodes_ = nodes;
  law.f_.resize(n);
  law.g_.resize(n);
  law.gleft_.resize(n);
  law.kmid_.resize(n);
  law.katom_.resize(n);
  law.g_[0] = base.cdf(0.0);
  law.gleft_[0] = 0.0;
  law.katom_[0] = law.kernel(0.0);
  law.kmid_[0] = law.katom_[0];
  law.f_[0] = law.g_[0] * law.katom_[0];
  law.log_f_.resize(n);
  law.log_f_[0] = safe_log(law.f_[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double x = nodes[i];
    law.g_[i] = base.cdf(x);
    law.gleft_[i] = base.cdf_left(x);
    law.kmid_[i] = law.kernel(0.5 * (nodes[i - 1] + x));
    law.katom_[i] = law.kernel(x);
    const double cont = std::max(0.0, law.gleft_[i] - law.g_[i - 1]);
    const double atom = law.g_[i] - law.gleft_[i];
    law.f_[i] = law.f_[i - 1] + law.kmid_[i] * cont + law.katom_[i] * atom;
    if (law.f_[i] > kTiny) {
      law.log_f_[i] = std::log(law.f_[i]);
    } else {
      double lcont = kNegInf;
      if (law.kmid_[i] > 0.0)
        lcont = std::log(law.kmid_[i]) + log_diff(base.log_cdf(x), base.log_cdf(nodes[i - 1]));
      law.log_f_[i] = log_add2(log_add2(law.log_f_[i - 1], lcont), safe_log(law.katom_[i] * atom));
    }
  }
  law.tail_bound_ = 1.0 - law.g_.back();
  return law;
}

double ImproperLaw::kernel(double u) const {
  if (kind_ == ThinKind::Contagion) return 1.0 - kernel_law_.cdf_left(u);
  return kernel_law_.cdf(u);
}

double ImproperLaw::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf argument is NaN");
  if (x < 0.0) return 0.0;
  if (x >= nodes_.back()) return f_.back();
  const std::size_t i = static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin());
  if (nodes_[i] == x) return f_[i];
  const double gx = std::min(base_.cdf(x), gleft_[i]);
  return f_[i - 1] + kmid_[i] * std::max(0.0, gx - g_[i - 1]);
}

double ImproperLaw::log_cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf argument is NaN");
  if (x < 0.0) return kNegInf;
  if (x >= nodes_.back()) return log_f_.back();
  const std::size_t i = static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin());
  if (nodes_[i] == x) return log_f_[i];
  const double c = cdf(x);
  if (c > kTiny) return std::log(c);
  if (!(kmid_[i] > 0.0)) return log_f_[i - 1];
  return log_add2(log_f_[i - 1], std::log(kmid_[i]) + log_diff(base_.log_cdf(x), base_.log_cdf(nodes_[i - 1])));
}

double ImproperLaw::inv_cdf(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("inverse CDF level outside [0,1]");
  if (u >= f_.back()) return kInf;
  if (u <= f_[0]) return 0.0;
  const std::size_t i = static_cast<std::size_t>(std::lower_bound(f_.begin(), f_.end(), u) - f_.begin());
  const double cont_top = f_[i - 1] + kmid_[i] * std::max(0.0, gleft_[i] - g_[i - 1]);
  if (kmid_[i] > 0.0 && u <= cont_top) {
    const double target = std::min(1.0, g_[i - 1] + (u - f_[i - 1]) / kmid_[i]);
    return std::clamp(base_.inv_cdf(target), nodes_[i - 1], nodes_[i]);
  }
  return nodes_[i];
}

std::vector<std::pair<double, double>> ImproperLaw::atoms() const {
  std::vector<std::pair<double, double>> out;
  if (f_[0] > 0.0) out.emplace_back(0.0, f_[0]);
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const double m = (g_[i] - gleft_[i]) * katom_[i];
    if (m > 0.0) out.emplace_back(nodes_[i], m);
  }
  return out;
}

ImproperLaw thin_by_contagion(const LifetimeLaw& G, const LifetimeLaw& C, const ThinOptions& opts) {
  return ImproperLaw::thin(G, C, ThinKind::Contagion, opts);
}

ImproperLaw thin_by_incubation(const LifetimeLaw& G, const LifetimeLaw& I, const ThinOptions& opts) {
  return ImproperLaw::thin(G, I, ThinKind::Incubation, opts);
}

double age_cdf(const AgeLaw& law, double t) {
  return std::visit([&](const auto& l) { return l.cdf(t); }, law);
}

double age_log_cdf(const AgeLaw& law, double t) {
  if (auto* l = std::get_if<LifetimeLaw>(&law)) return l->log_cdf(t);
  return std::get<ImproperLaw>(law).log_cdf(t);
}

double age_inv_cdf(const AgeLaw& law, double u) {
  return std::visit([&](const auto& l) { return l.inv_cdf(u); }, law);
}

double age_total_mass(const AgeLaw& law) {
  if (auto* im = std::get_if<ImproperLaw>(&law)) return im->total_mass();
  return 1.0;
}

std::vector<std::pair<double, double>> age_atoms(const AgeLaw& law) {
  return std::visit([&](const auto& l) { return l.atoms(); }, law);
}

}  // namespace agebp
