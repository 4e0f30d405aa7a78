#include "agebp/process.hpp"

namespace agebp {

const OffspringLaw& offspring_of(const ProcessSpec& spec) {
  return std::visit([](const auto& s) -> const OffspringLaw& { return s.h; }, spec);
}

const char* spec_type_name(const ProcessSpec& spec) {
  switch (spec.index()) {
    case 0: return "classical";
    case 1: return "forward_contagious";
    case 2: return "backward_contagious";
    case 3: return "forward_incubation";
    default: return "backward_incubation";
  }
}

bool is_backward(const ProcessSpec& spec) {
  return std::holds_alternative<BackwardContagious>(spec) || std::holds_alternative<BackwardIncubation>(spec);
}

Classical as_classical(const BackwardContagious& spec) {
  return Classical{spec.h, AgeLaw{thin_by_contagion(spec.G, spec.C)}};
}

Classical as_classical(const BackwardIncubation& spec) {
  return Classical{spec.h, AgeLaw{thin_by_incubation(spec.G, spec.I)}};
}

}  // namespace agebp
