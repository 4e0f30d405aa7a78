#include "agebp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace agebp {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::normal() {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double binomial(Rng& rng, double n, double p) {
  if (n <= 0.0 || p <= 0.0) return 0.0;
  if (p >= 1.0) return n;
  if (n < 9.0e18) {
    std::binomial_distribution<int64_t> dist(static_cast<int64_t>(n), p);
    return static_cast<double>(dist(rng.engine()));
  }
  const double mean = n * p;
  const double sd = std::sqrt(n * p * (1.0 - p));
  const double k = std::round(mean + sd * rng.normal());
  return std::clamp(k, 0.0, n);
}

double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0e7) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(rng.engine());
  }
  return shape + std::sqrt(shape) * rng.normal();
}

}  // namespace agebp
