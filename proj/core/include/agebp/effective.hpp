#pragma once

#include <cstddef>

#include "agebp/lifetime.hpp"
#include "agebp/offspring.hpp"

namespace agebp {

struct EffectiveOptions {
  std::size_t cells = 4096;
  double horizon_medians = 50.0;  // truncation of the dC integral
};

// h_eff(s) = int h(1 - (1-s) G(x)) dC(x), the offspring pgf of the forward
// contagious process. Equals 1 at s = 1 exactly.
double effective_pgf(const OffspringLaw& h, const LifetimeLaw& G, const LifetimeLaw& C, double s,
                     const EffectiveOptions& opts = {});
// 1 - h_eff(1 - y).
double effective_pgf_complement(const OffspringLaw& h, const LifetimeLaw& G, const LifetimeLaw& C, double y,
                                const EffectiveOptions& opts = {});

}  // namespace agebp
