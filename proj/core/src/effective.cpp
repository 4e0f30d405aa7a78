#include "agebp/effective.hpp"

#include <algorithm>
#include <cmath>

#include "agebp/error.hpp"
#include "agebp/grid_measure.hpp"

namespace agebp {

double effective_pgf_complement(const OffspringLaw& h, const LifetimeLaw& G, const LifetimeLaw& C, double y,
                                const EffectiveOptions& opts) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("pgf argument outside [0,1]");
  if (opts.cells < 1) throw DomainError("effective pgf needs at least one cell");
  double H = opts.horizon_medians * C.median();
  if (std::isfinite(C.support_max())) H = std::max(H, C.support_max());
  const auto J = static_cast<int64_t>(opts.cells);
  double acc = C.cdf(0.0) * h.pgf_complement(y * G.cdf(0.0));
  if (H > 0.0) {
    const double dt = H / static_cast<double>(J);
    const GridMeasure gm = GridMeasure::from_law(AgeLaw{C}, dt, J);
    for (int64_t i = 1; i <= J; ++i)
      for (const auto& p : gm.cells[static_cast<std::size_t>(i)]) {
        const double x = (static_cast<double>(i - 1) + p.theta) * dt;
        acc += p.mass * h.pgf_complement(y * G.cdf(x));
      }
    acc += (1.0 - C.cdf(H)) * h.pgf_complement(y * G.cdf(H));
  }
  return std::clamp(acc, 0.0, 1.0);
}

double effective_pgf(const OffspringLaw& h, const LifetimeLaw& G, const LifetimeLaw& C, double s,
                     const EffectiveOptions& opts) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("pgf argument outside [0,1]");
  return 1.0 - effective_pgf_complement(h, G, C, 1.0 - s, opts);
}

}  // namespace agebp
