#pragma once

#include <string>

namespace agebp {

enum class Verdict { Explosive, Conservative, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Explosive: return "explosive";
    case Verdict::Conservative: return "conservative";
    default: return "inconclusive";
  }
}

}  // namespace agebp
