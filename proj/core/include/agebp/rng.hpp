#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace agebp {

uint64_t splitmix64(uint64_t x);

// Seed for stream `index` under `master`; distinct indices give unrelated streams.
uint64_t derive_seed(uint64_t master, uint64_t index);

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // 53-bit uniform on [0,1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  // 53-bit uniform on (0,1].
  double uniform_pos() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform_pos()); }
  double normal();

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Bin(n, p) for counts stored as doubles; falls back to a normal approximation
// once n exceeds the int64 range. No draw is consumed when p is 0 or 1.
double binomial(Rng& rng, double n, double p);

// Gamma(shape, 1); shape may be huge, in which case a normal approximation is used.
double gamma_draw(Rng& rng, double shape);

}  // namespace agebp
