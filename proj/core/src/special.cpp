#include "agebp/special.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace agebp {

namespace {

// Stirling series for log Gamma(z) without the (z - 1/2) log z - z part.
long double stirling_tail(long double z) {
  const long double z2 = z * z;
  return 1.0L / (12.0L * z) - 1.0L / (360.0L * z * z2) + 1.0L / (1260.0L * z * z2 * z2);
}

}  // namespace

long double log_gamma_ratio(long double x, long double a) {
  const long double y = x - a;
  if (x < 30.0L || y < 30.0L) return std::lgamma(y) - std::lgamma(x);
  // (y - 1/2) log y - (x - 1/2) log x + a, with log y = log x + log1p(-a/x).
  const long double l1p = std::log1p(-a / x);
  const long double lx = std::log(x);
  return -a * lx + (y - 0.5L) * l1p + a + stirling_tail(y) - stirling_tail(x);
}

long double log_add(long double a, long double b) {
  if (a == -std::numeric_limits<long double>::infinity()) return b;
  if (b == -std::numeric_limits<long double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace agebp
