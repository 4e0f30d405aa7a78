#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "agebp/grid_measure.hpp"
#include "agebp/process.hpp"
#include "agebp/verdict.hpp"

namespace agebp {

struct TimeGrid {
  double dt = 1e-3;
  double horizon = 1.0;
  int64_t J = 1000;

  static TimeGrid make(double dt, double horizon);
  double t(int64_t j) const { return static_cast<double>(j) * dt; }
  bool operator==(const TimeGrid& o) const { return dt == o.dt && horizon == o.horizon && J == o.J; }
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iters = 10000;
  double threshold = 1e-2;
  unsigned threads = 0;  // 0: hardware concurrency
};

// phi on the grid. The solver works with log(1 - phi): near t = 0 the
// explosion probability of an explosive spec can sit far below 1e-300, and
// flushing it to zero turns the discrete map conservative.
struct PhiTable {
  TimeGrid grid;
  std::vector<double> eta;      // 1 - phi
  std::vector<double> log_eta;  // log(1 - phi)
  int iterations = 0;
  double sup_residual = 0.0;
  bool converged = false;

  double phi(int64_t j) const { return 1.0 - eta[static_cast<std::size_t>(j)]; }
  static PhiTable from_log(const TimeGrid& grid, std::vector<double> log_eta);
  static PhiTable from_eta(const TimeGrid& grid, std::vector<double> eta);
  void write_csv(std::ostream& os) const;
};

// Psi on the grid, stored as 1 - Psi.
struct TestFunction {
  TimeGrid grid;
  std::vector<double> one_minus_psi;
};

// The map phi -> T phi of a process, acting on eta = 1 - phi.
class FixedPointOperator {
 public:
  FixedPointOperator(const ProcessSpec& spec, const TimeGrid& grid, unsigned threads = 0);
  ~FixedPointOperator();
  FixedPointOperator(FixedPointOperator&&) noexcept;

  const TimeGrid& grid() const;
  std::vector<double> apply(const std::vector<double>& eta) const;
  std::vector<double> apply_log(const std::vector<double>& log_eta) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

PhiTable apply_operator(const ProcessSpec& spec, const PhiTable& phi);
PhiTable iterate_phi(const ProcessSpec& spec, const TimeGrid& grid, const SolverOptions& opts = {});

Verdict explosion_verdict(const PhiTable& phi, double threshold = 1e-2, double tol = 1e-8);

bool verify_certificate(const ProcessSpec& spec, const TestFunction& psi, double tol = 1e-8);

// Psi = 1 - A (1 - phi_classical) for the largest A = 2^-k that certifies the
// forward spec. Throws CertificateNotFound.
TestFunction scaled_certificate_from_classical(const PhiTable& phi_classical, double alpha,
                                               const ProcessSpec& spec_forward, double tol = 1e-8);

// With A = c^(alpha/(1-alpha)): max_j |A eta_j - (sum A eta(t_j - u) c dG(u))^alpha|
// for a solved heavy-tail classical spec.
double scaling_residual(const ProcessSpec& classical, const PhiTable& phi, double c);

struct SurvivalReport {
  double eta_infinity = 0.0;
  double extinction_q = 1.0;
};

SurvivalReport survival_probability(const ProcessSpec& spec);

}  // namespace agebp
