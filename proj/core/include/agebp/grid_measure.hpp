#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "agebp/improper.hpp"

namespace agebp {

// A law restricted to the cells (t_{i-1}, t_i] of the grid t_j = j*dt. The atom
// at 0 is kept apart; inside a cell, point masses keep their exact position and
// the continuous part sits at the midpoint. Masses are also kept as logs since
// laws like exp(-1/t) put less than 1e-300 on the first cells.
struct GridMeasure {
  struct Piece {
    double mass;
    double log_mass;
    double theta;  // position inside the cell, (pos - t_{i-1}) / dt
  };

  double dt = 0.0;
  double atom0 = 0.0;
  double log_atom0 = 0.0;
  std::vector<std::vector<Piece>> cells;  // index 1..J, cells[0] unused
  // Weights of the lag-i contribution on eta_{j-i} (a) and eta_{j-i+1} (b),
  // from linear interpolation of eta at t_j - pos.
  std::vector<double> a, b;
  std::vector<double> log_a, log_b;

  static GridMeasure from_law(const AgeLaw& law, double dt, int64_t J);

  int64_t size() const { return static_cast<int64_t>(cells.size()) - 1; }
  double cdf_at(int64_t j) const;  // mass in [0, t_j]
  GridMeasure scaled(double c) const;

  // int_0^{t_j} eta(t_j - u) d(law)(u)
  double full_sum(const std::vector<double>& eta, int64_t j) const;
  // Same in logs: log_eta in, log of the integral out.
  double log_full_sum(const std::vector<double>& log_eta, int64_t j) const;
  // out[k] = log of the integral restricted to cells 0..k, for k = 0..j.
  void log_prefix_sums(const std::vector<double>& log_eta, int64_t j, std::vector<double>& out) const;
};

// Running log(sum exp(x_i)) without overflow or underflow.
class LogAccumulator {
 public:
  void add(double x);
  double value() const;

 private:
  double m_ = -std::numeric_limits<double>::infinity();
  double s_ = 0.0;
};

}  // namespace agebp
