#include "agebp/fpe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "agebp/error.hpp"
#include "parallel.hpp"

namespace agebp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// log((1 - w) e^lo + w e^hi) with lo <= hi.
double log_lerp(double lo, double hi, double w) {
  if (hi == kNegInf) return kNegInf;
  if (w >= 1.0) return hi;
  if (lo == kNegInf) return w > 0.0 ? hi + std::log(w) : kNegInf;
  return hi + std::log(w + (1.0 - w) * std::exp(lo - hi));
}

// log(e^hi - e^lo)
double log_minus(double hi, double lo) {
  if (lo == kNegInf) return hi;
  if (!(hi > lo)) return kNegInf;
  return hi + std::log(-std::expm1(lo - hi));
}

std::vector<double> logs_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = safe_log(std::clamp(v[i], 0.0, 1.0));
  return out;
}

}  // namespace

TimeGrid TimeGrid::make(double dt, double horizon) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw DomainError("grid needs dt > 0 and horizon > 0");
  TimeGrid g;
  g.dt = dt;
  g.horizon = horizon;
  g.J = static_cast<int64_t>(std::ceil(horizon / dt - 1e-9));
  if (g.J < 1) g.J = 1;
  return g;
}

PhiTable PhiTable::from_log(const TimeGrid& grid, std::vector<double> log_eta) {
  PhiTable t;
  t.grid = grid;
  t.eta.resize(log_eta.size());
  for (std::size_t j = 0; j < log_eta.size(); ++j) t.eta[j] = std::exp(log_eta[j]);
  t.log_eta = std::move(log_eta);
  return t;
}

PhiTable PhiTable::from_eta(const TimeGrid& grid, std::vector<double> eta) {
  PhiTable t;
  t.grid = grid;
  t.log_eta = logs_of(eta);
  t.eta = std::move(eta);
  return t;
}

void PhiTable::write_csv(std::ostream& os) const {
  os << "t,phi,one_minus_phi\n";
  char buf[128];
  for (int64_t j = 0; j <= grid.J; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.t(j), phi(j), eta[static_cast<std::size_t>(j)]);
    os << buf;
  }
}

struct FixedPointOperator::Impl {
  enum class Kind { Classical, Contagion, Incubation };
  Kind kind;
  TimeGrid grid;
  unsigned threads;
  OffspringLaw h;
  GridMeasure g;
  GridMeasure outer;                  // C or I
  std::vector<double> log_outer_rest;  // log of the outer mass beyond t_j

  Impl(Kind k, const TimeGrid& gr, unsigned th, OffspringLaw hh, GridMeasure gg)
      : kind(k), grid(gr), threads(th), h(std::move(hh)), g(std::move(gg)) {}

  double log_hc(double ly) const { return h.log_pgf_complement(std::min(ly, 0.0)); }

  double at(const std::vector<double>& L, int64_t j, std::vector<double>& prefix) const {
    if (kind == Kind::Classical) return log_hc(g.log_full_sum(L, j));
    g.log_prefix_sums(L, j, prefix);
    const double total = prefix[static_cast<std::size_t>(j)];
    LogAccumulator acc;
    if (kind == Kind::Contagion) {
      // period x <= t_j: only children with X <= x count
      acc.add(outer.log_atom0 + log_hc(prefix[0]));
      for (int64_t m = 1; m <= j; ++m) {
        const double lo = prefix[static_cast<std::size_t>(m - 1)], hi = prefix[static_cast<std::size_t>(m)];
        for (const auto& p : outer.cells[static_cast<std::size_t>(m)])
          acc.add(p.log_mass + log_hc(log_lerp(lo, hi, p.theta)));
      }
      // period beyond t_j: as in the classical process up to t_j
      acc.add(log_outer_rest[static_cast<std::size_t>(j)] + log_hc(total));
    } else {
      // incubation x <= t_j: only children with X >= x count
      acc.add(outer.log_atom0 + log_hc(total));
      for (int64_t m = 1; m <= j; ++m) {
        const double lo = prefix[static_cast<std::size_t>(m - 1)], hi = prefix[static_cast<std::size_t>(m)];
        for (const auto& p : outer.cells[static_cast<std::size_t>(m)])
          acc.add(p.log_mass + log_hc(log_minus(total, log_lerp(lo, hi, p.theta))));
      }
    }
    return std::min(acc.value(), 0.0);
  }
};

FixedPointOperator::FixedPointOperator(const ProcessSpec& spec, const TimeGrid& grid, unsigned threads) {
  using Kind = Impl::Kind;
  const unsigned th = detail::resolve_threads(threads);
  auto classical = [&](const Classical& c) {
    impl_ = std::make_unique<Impl>(Kind::Classical, grid, th, c.h, GridMeasure::from_law(c.G, grid.dt, grid.J));
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Classical>) {
          classical(s);
        } else if constexpr (std::is_same_v<T, BackwardContagious> || std::is_same_v<T, BackwardIncubation>) {
          classical(as_classical(s));
        } else {
          const LifetimeLaw* outer;
          if constexpr (std::is_same_v<T, ForwardContagious>) outer = &s.C;
          else outer = &s.I;
          impl_ = std::make_unique<Impl>(std::is_same_v<T, ForwardContagious> ? Kind::Contagion : Kind::Incubation,
                                         grid, th, s.h, GridMeasure::from_law(AgeLaw{s.G}, grid.dt, grid.J));
          impl_->outer = GridMeasure::from_law(AgeLaw{*outer}, grid.dt, grid.J);
          impl_->log_outer_rest.resize(static_cast<std::size_t>(grid.J) + 1);
          for (int64_t j = 0; j <= grid.J; ++j) {
            // 1 - C(t_j) from the law itself keeps the digits of a tiny remainder
            const double rest = 1.0 - outer->cdf(grid.t(j));
            impl_->log_outer_rest[static_cast<std::size_t>(j)] = safe_log(rest);
          }
        }
      },
      spec);
}

FixedPointOperator::~FixedPointOperator() = default;
FixedPointOperator::FixedPointOperator(FixedPointOperator&&) noexcept = default;

const TimeGrid& FixedPointOperator::grid() const { return impl_->grid; }

std::vector<double> FixedPointOperator::apply_log(const std::vector<double>& L) const {
  const int64_t n = impl_->grid.J + 1;
  if (static_cast<int64_t>(L.size()) != n) throw DomainError("grid mismatch: table size differs from grid");
  std::vector<double> out(static_cast<std::size_t>(n));
  const unsigned th = impl_->kind == Impl::Kind::Classical && n < 2048 ? 1u : impl_->threads;
  if (th <= 1) {
    std::vector<double> prefix;
    for (int64_t j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = impl_->at(L, j, prefix);
  } else {
    detail::parallel_for(n, th, [&](int64_t j) {
      thread_local std::vector<double> prefix;
      out[static_cast<std::size_t>(j)] = impl_->at(L, j, prefix);
    });
  }
  return out;
}

std::vector<double> FixedPointOperator::apply(const std::vector<double>& eta) const {
  std::vector<double> out = apply_log(logs_of(eta));
  for (double& x : out) x = std::exp(x);
  return out;
}

namespace {

const std::vector<double>& table_logs(const PhiTable& t, std::vector<double>& scratch) {
  if (t.log_eta.size() == t.eta.size()) return t.log_eta;
  scratch = logs_of(t.eta);
  return scratch;
}

}  // namespace

PhiTable apply_operator(const ProcessSpec& spec, const PhiTable& phi) {
  if (static_cast<int64_t>(phi.eta.size()) != phi.grid.J + 1) throw DomainError("grid mismatch: table size differs from grid");
  FixedPointOperator op(spec, phi.grid);
  std::vector<double> scratch;
  PhiTable out = PhiTable::from_log(phi.grid, op.apply_log(table_logs(phi, scratch)));
  double res = 0.0;
  for (std::size_t j = 0; j < out.eta.size(); ++j) res = std::max(res, std::abs(out.eta[j] - phi.eta[j]));
  out.sup_residual = res;
  return out;
}

PhiTable iterate_phi(const ProcessSpec& spec, const TimeGrid& grid, const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("tol must be > 0");
  if (opts.max_iters < 1) throw DomainError("max_iters must be >= 1");
  FixedPointOperator op(spec, grid, opts.threads);
  std::vector<double> L(static_cast<std::size_t>(grid.J) + 1, 0.0);  // phi_0 = 0
  std::vector<double> eta(L.size(), 1.0);
  int iters = 0;
  double res = 0.0;
  bool converged = false;
  for (int k = 1; k <= opts.max_iters; ++k) {
    std::vector<double> next = op.apply_log(L);
    res = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double e = std::exp(next[j]);
      if (e > eta[j] + 1e-12)
        throw NonMonotone("iterate decreased at t = " + std::to_string(grid.t(static_cast<int64_t>(j))) +
                          " in step " + std::to_string(k));
      res = std::max(res, eta[j] - e);
      eta[j] = e;
    }
    L = std::move(next);
    iters = k;
    if (res < opts.tol) {
      converged = true;
      break;
    }
  }
  PhiTable tab = PhiTable::from_log(grid, std::move(L));
  tab.iterations = iters;
  tab.sup_residual = res;
  tab.converged = converged;
  return tab;
}

Verdict explosion_verdict(const PhiTable& phi, double threshold, double tol) {
  if (!phi.converged || phi.eta.empty()) return Verdict::Inconclusive;
  if (phi.eta.back() > threshold) return Verdict::Explosive;
  const double mx = *std::max_element(phi.eta.begin(), phi.eta.end());
  if (mx <= tol) return Verdict::Conservative;
  return Verdict::Inconclusive;
}

bool verify_certificate(const ProcessSpec& spec, const TestFunction& psi, double tol) {
  const auto& e = psi.one_minus_psi;
  if (static_cast<int64_t>(e.size()) != psi.grid.J + 1) throw DomainError("grid mismatch: test function size differs from grid");
  if (*std::max_element(e.begin(), e.end()) <= tol) return false;  // Psi == 1
  FixedPointOperator op(spec, psi.grid);
  const std::vector<double> te = op.apply(e);
  for (std::size_t j = 0; j < e.size(); ++j)
    if (e[j] > te[j] + tol) return false;
  return true;
}

TestFunction scaled_certificate_from_classical(const PhiTable& phi_classical, double alpha,
                                               const ProcessSpec& spec_forward, double tol) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  const double mx = *std::max_element(phi_classical.eta.begin(), phi_classical.eta.end());
  FixedPointOperator op(spec_forward, phi_classical.grid);
  std::vector<double> scratch;
  const std::vector<double>& L = table_logs(phi_classical, scratch);
  TestFunction psi;
  psi.grid = phi_classical.grid;
  psi.one_minus_psi.resize(phi_classical.eta.size());
  std::vector<double> lpsi(L.size());
  // below 1000 tol the inequality check says little; stop there
  for (double A = 1.0; A * mx > 1e3 * tol; A *= 0.5) {
    const double lA = std::log(A);
    for (std::size_t j = 0; j < L.size(); ++j) {
      lpsi[j] = L[j] + lA;
      psi.one_minus_psi[j] = A * phi_classical.eta[j];
    }
    const std::vector<double> tl = op.apply_log(lpsi);
    bool ok = true;
    for (std::size_t j = 0; j < tl.size() && ok; ++j) ok = psi.one_minus_psi[j] <= std::exp(tl[j]) + tol;
    if (ok) return psi;
  }
  throw CertificateNotFound("no scaling of the classical solution certifies the forward process on this grid");
}

double scaling_residual(const ProcessSpec& classical, const PhiTable& phi, double c) {
  const auto* cl = std::get_if<Classical>(&classical);
  if (!cl) throw DomainError("scaling residual needs a classical spec");
  const auto* ht = std::get_if<HeavyTailAlpha>(&cl->h.variant());
  if (!ht) throw DomainError("scaling residual needs a heavy-tail offspring law");
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("scaling constant must lie in (0,1]");
  const double alpha = ht->alpha;
  const double A = std::pow(c, alpha / (1.0 - alpha));
  const GridMeasure g = GridMeasure::from_law(cl->G, phi.grid.dt, phi.grid.J).scaled(c);
  std::vector<double> scratch;
  const std::vector<double>& L = table_logs(phi, scratch);
  std::vector<double> ls(L.size());
  const double lA = std::log(A);
  for (std::size_t j = 0; j < L.size(); ++j) ls[j] = L[j] + lA;
  double worst = 0.0;
  for (int64_t j = 0; j <= phi.grid.J; ++j) {
    const double rhs = std::exp(alpha * std::min(0.0, g.log_full_sum(ls, j)));
    worst = std::max(worst, std::abs(std::exp(ls[static_cast<std::size_t>(j)]) - rhs));
  }
  return worst;
}

}  // namespace agebp
