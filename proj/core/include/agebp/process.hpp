#pragma once

#include <string>
#include <variant>

#include "agebp/improper.hpp"
#include "agebp/lifetime.hpp"
#include "agebp/offspring.hpp"

namespace agebp {

struct Classical {
  OffspringLaw h;
  AgeLaw G;
};

// Child admitted iff its lifetime X <= the parent's contagious period.
struct ForwardContagious {
  OffspringLaw h;
  LifetimeLaw G;
  LifetimeLaw C;
};

// Child admitted iff X <= the child's own contagious period.
struct BackwardContagious {
  OffspringLaw h;
  LifetimeLaw G;
  LifetimeLaw C;
};

// Child admitted iff X >= the parent's incubation period.
struct ForwardIncubation {
  OffspringLaw h;
  LifetimeLaw G;
  LifetimeLaw I;
};

// Child admitted iff X >= the child's own incubation period.
struct BackwardIncubation {
  OffspringLaw h;
  LifetimeLaw G;
  LifetimeLaw I;
};

using ProcessSpec =
    std::variant<Classical, ForwardContagious, BackwardContagious, ForwardIncubation, BackwardIncubation>;

const OffspringLaw& offspring_of(const ProcessSpec& spec);
const char* spec_type_name(const ProcessSpec& spec);
bool is_backward(const ProcessSpec& spec);

// The classical process with the thinned lifetime law that a backward process
// coincides with. Uses default thinning options, so every caller gets the
// same table.
Classical as_classical(const BackwardContagious& spec);
Classical as_classical(const BackwardIncubation& spec);

}  // namespace agebp
