#include "agebp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>

#include "agebp/error.hpp"
#include "agebp/stats.hpp"
#include "parallel.hpp"

namespace agebp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Pending {
  double time;
  int gen;
  bool operator<(const Pending& o) const { return time < o.time || (time == o.time && gen < o.gen); }
};

}  // namespace

struct Simulator::Impl {
  enum class Rule { All, ParentContagion, ParentIncubation };
  SimConfig cfg;
  Rule rule = Rule::All;
  OffspringLaw h;
  AgeLaw life;                      // law the child lifetime is drawn from
  std::optional<LifetimeLaw> period;  // C or I of the parent

  explicit Impl(const SimConfig& c) : cfg(c), h(offspring_of(c.spec)), life(LifetimeLaw::deterministic(0.0)) {
    if (!(cfg.horizon > 0.0)) throw DomainError("horizon must be > 0");
    if (cfg.cap < 1) throw DomainError("cap must be >= 1");
    if (cfg.trials < 1) throw DomainError("trials must be >= 1");
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Classical>) {
            life = s.G;
          } else if constexpr (std::is_same_v<T, ForwardContagious>) {
            life = s.G;
            period = s.C;
            rule = Rule::ParentContagion;
          } else if constexpr (std::is_same_v<T, ForwardIncubation>) {
            life = s.G;
            period = s.I;
            rule = Rule::ParentIncubation;
          } else {
            // backward processes are the classical process on the thinned law
            life = as_classical(s).G;
          }
        },
        cfg.spec);
  }

  SimOutcome run(uint64_t trial) const {
    Rng rng(derive_seed(cfg.master_seed, trial));
    SimOutcome out;
    out.proxy_time = kInf;
    std::multiset<Pending> pending;
    pending.insert({0.0, 0});
    const auto mem_limit = static_cast<std::size_t>(std::min<int64_t>(cfg.cap, int64_t{1} << 40)) * 8;
    while (!pending.empty()) {
      const Pending cur = *pending.begin();
      pending.erase(pending.begin());
      ++out.births;
      if (static_cast<std::size_t>(cur.gen) >= out.generation_sizes.size())
        out.generation_sizes.resize(static_cast<std::size_t>(cur.gen) + 1, 0);
      ++out.generation_sizes[static_cast<std::size_t>(cur.gen)];
      if (cfg.record_births) out.birth_times.push_back(cur.time);
      if (out.births >= cfg.cap) {
        out.exploded_proxy = true;
        out.proxy_time = cur.time;
        break;
      }
      // only the earliest `remaining` pending births can still be processed
      const auto remaining = static_cast<std::size_t>(cfg.cap - out.births);
      while (pending.size() > remaining) pending.erase(std::prev(pending.end()));
      spawn(cur, remaining, pending, rng, out);
      if (pending.size() > mem_limit) throw CapMemoryExceeded("pending births exceed 8 times the cap");
    }
    return out;
  }

  void spawn(const Pending& parent, std::size_t remaining, std::multiset<Pending>& pending, Rng& rng,
             SimOutcome& out) const {
    const double D = h.sample_real(rng);
    const double u_period = rng.uniform();
    double lo = 0.0, p = 1.0;
    const LifetimeLaw* G = std::get_if<LifetimeLaw>(&life);
    if (rule == Rule::ParentContagion) {
      p = G->cdf(period->inv_cdf(u_period));
    } else if (rule == Rule::ParentIncubation) {
      lo = G->cdf_left(period->inv_cdf(u_period));
      p = 1.0 - lo;
    } else {
      p = age_total_mass(life);
    }
    const double k = binomial(rng, D, p);
    out.children_considered += D;
    out.children_admitted += k;
    if (k <= 0.0) return;
    bool full = pending.size() >= remaining;
    double cutoff = full ? std::prev(pending.end())->time : cfg.horizon;
    double log_w = 0.0;  // log(1 - v), v the running maximum of the sorted uniforms
    for (double i = 0.0; i < k; i += 1.0) {
      log_w += std::log1p(-rng.uniform()) / (k - i);
      const double v = -std::expm1(log_w);
      const double x = G ? G->inv_cdf(std::min(1.0, lo + p * v)) : age_inv_cdf(life, p * v);
      const double bt = parent.time + x;
      if (full ? bt >= cutoff : bt > cfg.horizon) break;
      pending.insert({bt, parent.gen + 1});
      if (pending.size() > remaining) pending.erase(std::prev(pending.end()));
      if (pending.size() >= remaining) {
        full = true;
        cutoff = std::prev(pending.end())->time;
      }
    }
  }
};

Simulator::Simulator(const SimConfig& config) : impl_(std::make_unique<Impl>(config)) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
SimOutcome Simulator::run(uint64_t trial) const { return impl_->run(trial); }
const SimConfig& Simulator::config() const { return impl_->cfg; }

SimOutcome simulate_forward(const SimConfig& config, uint64_t trial) {
  if (is_backward(config.spec)) throw DomainError("simulate_forward needs a classical or forward spec");
  return Simulator(config).run(trial);
}

SimOutcome simulate_backward(const SimConfig& config, uint64_t trial) {
  if (!is_backward(config.spec)) throw DomainError("simulate_backward needs a backward spec");
  return Simulator(config).run(trial);
}

double EmpiricalDistribution::cdf(double t) const {
  if (trials == 0) return 0.0;
  const auto n = std::upper_bound(times.begin(), times.end(), t) - times.begin();
  return static_cast<double>(n) / static_cast<double>(trials);
}

void EmpiricalDistribution::write_csv(std::ostream& os) const {
  os << "proxy_time,censored\n";
  char buf[64];
  for (const double t : times) {
    std::snprintf(buf, sizeof buf, "%.17g,0\n", t);
    os << buf;
  }
  for (int64_t i = 0; i < censored; ++i) os << "inf,1\n";
}

EmpiricalDistribution empirical_explosion_time(const SimConfig& config) {
  const Simulator sim(config);
  std::vector<SimOutcome> outs(static_cast<std::size_t>(config.trials));
  detail::parallel_for(config.trials, detail::resolve_threads(config.threads),
                       [&](int64_t i) { outs[static_cast<std::size_t>(i)] = sim.run(static_cast<uint64_t>(i)); });
  EmpiricalDistribution ed;
  ed.trials = config.trials;
  for (const auto& o : outs) {
    if (o.exploded_proxy) ed.times.push_back(o.proxy_time);
    else ++ed.censored;
  }
  std::sort(ed.times.begin(), ed.times.end());
  return ed;
}

nlohmann::json DominationReport::to_json() const {
  return {{"violated", violated}, {"max_gap", max_gap}, {"critical_value", critical_value}};
}

DominationReport domination_test(const EmpiricalDistribution& lower, const EmpiricalDistribution& upper, double level) {
  if (lower.times.size() < 30 || upper.times.size() < 30)
    throw SampleTooSmall("domination test needs at least 30 uncensored samples on each side");
  DominationReport rep;
  double gap = 0.0;
  for (const auto* src : {&lower.times, &upper.times})
    for (const double t : *src) gap = std::max(gap, upper.cdf(t) - lower.cdf(t));
  rep.max_gap = gap;
  rep.critical_value = ks_critical_one_sided(level, static_cast<std::size_t>(lower.trials),
                                             static_cast<std::size_t>(upper.trials));
  rep.violated = gap > rep.critical_value;
  return rep;
}

double backward_admission_rate(const ProcessSpec& spec, int64_t children, Rng& rng) {
  if (children < 1) throw DomainError("need at least one child");
  int64_t admitted = 0;
  if (const auto* bc = std::get_if<BackwardContagious>(&spec)) {
    for (int64_t i = 0; i < children; ++i) {
      const double x = bc->G.sample(rng);
      admitted += x <= bc->C.sample(rng);
    }
  } else if (const auto* bi = std::get_if<BackwardIncubation>(&spec)) {
    for (int64_t i = 0; i < children; ++i) {
      const double x = bi->G.sample(rng);
      admitted += x >= bi->I.sample(rng);
    }
  } else {
    throw DomainError("admission rate needs a backward spec");
  }
  return static_cast<double>(admitted) / static_cast<double>(children);
}

}  // namespace agebp
