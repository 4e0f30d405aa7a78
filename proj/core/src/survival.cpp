#include <cmath>
#include <functional>

#include "agebp/effective.hpp"
#include "agebp/error.hpp"
#include "agebp/fpe.hpp"

namespace agebp {

SurvivalReport survival_probability(const ProcessSpec& spec) {
  std::function<double(double)> hc;  // y -> 1 - h_eff(1 - y)
  if (auto* c = std::get_if<Classical>(&spec)) {
    const double rho = age_total_mass(c->G);
    hc = [c, rho](double y) { return c->h.pgf_complement(y * rho); };
  } else if (auto* f = std::get_if<ForwardContagious>(&spec)) {
    hc = [f](double y) { return effective_pgf_complement(f->h, f->G, f->C, y); };
  } else if (auto* bc = std::get_if<BackwardContagious>(&spec)) {
    const double rho = thin_by_contagion(bc->G, bc->C).total_mass();
    hc = [bc, rho](double y) { return bc->h.pgf_complement(y * rho); };
  } else {
    throw DomainError("survival probability is defined here for classical and contagious specs");
  }
  // eta is the largest root of hc(y) = y in [0,1]
  auto g = [&](double y) { return hc(y) - y; };
  SurvivalReport rep;
  if (g(1.0) >= 0.0) {
    rep.eta_infinity = 1.0;
  } else {
    double hi = 1.0, lo = 0.0;
    bool found = false;
    for (double y = 0.5; y > 0.0; y *= 0.5) {
      if (g(y) > 0.0) {
        lo = y;
        found = true;
        break;
      }
      hi = y;
    }
    if (found) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid; else hi = mid;
      }
      rep.eta_infinity = 0.5 * (lo + hi);
    }
  }
  rep.extinction_q = 1.0 - rep.eta_infinity;
  return rep;
}

}  // namespace agebp
