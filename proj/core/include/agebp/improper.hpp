#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "agebp/lifetime.hpp"
#include "agebp/rng.hpp"

namespace agebp {

enum class ThinKind { Contagion, Incubation };

struct ThinOptions {
  std::size_t cells = 65536;
  double horizon_medians = 50.0;  // truncation horizon in units of median(G)
};

// Sub-probability lifetime law F(x) = int_0^x k(u) dG(u), with the kernel
// k(u) = P(tau^C >= u) for contagion and k(u) = I(u) for incubation. The
// missing mass is an atom at +inf.
class ImproperLaw {
 public:
  static ImproperLaw thin(const LifetimeLaw& base, const LifetimeLaw& kernel_law, ThinKind kind,
                          const ThinOptions& opts = {});

  double cdf(double x) const;
  // Stays finite where F(x) underflows, as long as G's log-cdf does.
  double log_cdf(double x) const;
  double total_mass() const { return f_.back(); }
  // Mass of G beyond the truncation horizon that was not integrated.
  double tail_bound() const { return tail_bound_; }
  double horizon() const { return nodes_.back(); }
  double kernel(double u) const;
  const LifetimeLaw& base() const { return base_; }
  const LifetimeLaw& kernel_law() const { return kernel_law_; }
  ThinKind kind() const { return kind_; }

  // +inf when u >= total_mass.
  double inv_cdf(double u) const;
  double sample(Rng& rng) const { return inv_cdf(rng.uniform()); }
  std::vector<std::pair<double, double>> atoms() const;

 private:
  ImproperLaw(LifetimeLaw base, LifetimeLaw kernel_law, ThinKind kind)
      : base_(std::move(base)), kernel_law_(std::move(kernel_law)), kind_(kind) {}

  LifetimeLaw base_;
  LifetimeLaw kernel_law_;
  ThinKind kind_;
  std::vector<double> nodes_;   // x_0 = 0 < x_1 < ... < x_n = H
  std::vector<double> f_;       // F(x_i)
  std::vector<double> log_f_;   // log F(x_i)
  std::vector<double> kmid_;    // kernel at the midpoint of cell i (i >= 1)
  std::vector<double> g_;       // G(x_i)
  std::vector<double> gleft_;   // G(x_i-)
  std::vector<double> katom_;   // kernel at x_i (for atoms of G)
  double tail_bound_ = 0.0;
};

ImproperLaw thin_by_contagion(const LifetimeLaw& G, const LifetimeLaw& C, const ThinOptions& opts = {});
ImproperLaw thin_by_incubation(const LifetimeLaw& G, const LifetimeLaw& I, const ThinOptions& opts = {});

// A lifetime law that may carry mass at +inf.
using AgeLaw = std::variant<LifetimeLaw, ImproperLaw>;

double age_cdf(const AgeLaw& law, double t);
double age_log_cdf(const AgeLaw& law, double t);
double age_inv_cdf(const AgeLaw& law, double u);
double age_total_mass(const AgeLaw& law);
std::vector<std::pair<double, double>> age_atoms(const AgeLaw& law);

}  // namespace agebp
