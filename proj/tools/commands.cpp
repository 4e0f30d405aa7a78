#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "agebp/error.hpp"
#include "agebp/fpe.hpp"
#include "agebp/minsum.hpp"
#include "agebp/sim.hpp"
#include "agebp/stats.hpp"

namespace agebp::cli {

namespace {

using json = nlohmann::json;

json base_report(const char* command, const RunConfig& cfg) {
  return {{"command", command}, {"config", cfg.to_json()}, {"master_seed", cfg.sim.master_seed}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SimConfig sim_config(const RunConfig& cfg, const ProcessSpec& spec, uint64_t seed) {
  SimConfig s{spec};
  s.horizon = cfg.sim.horizon;
  s.cap = cfg.sim.cap;
  s.trials = cfg.sim.trials;
  s.master_seed = seed;
  s.threads = cfg.sim.threads;
  return s;
}

json summarize(const EmpiricalDistribution& ed) {
  json j{{"trials", ed.trials}, {"censored", ed.censored}, {"exploded", ed.times.size()}};
  j["median_proxy_time"] = ed.times.empty() ? json(nullptr) : json(median(ed.times));
  return j;
}

// forward spec and its backward counterpart with the same laws
std::pair<ProcessSpec, ProcessSpec> compare_pair(const ProcessSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::pair<ProcessSpec, ProcessSpec> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ForwardContagious> || std::is_same_v<T, BackwardContagious>)
          return {ForwardContagious{s.h, s.G, s.C}, BackwardContagious{s.h, s.G, s.C}};
        else if constexpr (std::is_same_v<T, ForwardIncubation> || std::is_same_v<T, BackwardIncubation>)
          return {ForwardIncubation{s.h, s.G, s.I}, BackwardIncubation{s.h, s.G, s.I}};
        else
          throw ConfigError("process.type", "compare needs a contagious or incubation process");
      },
      spec);
}

}  // namespace

CommandResult cmd_solve(const RunConfig& cfg) {
  const TimeGrid grid = TimeGrid::make(cfg.grid.dt, cfg.grid.horizon);
  SolverOptions opts;
  opts.tol = cfg.solver.tol;
  opts.max_iters = cfg.solver.max_iters;
  opts.threshold = cfg.solver.threshold;
  opts.threads = cfg.solver.threads;
  const PhiTable phi = iterate_phi(cfg.spec, grid, opts);
  const Verdict v = explosion_verdict(phi, opts.threshold, opts.tol);

  CommandResult r;
  r.report = base_report("solve", cfg);
  r.report["verdict"] = to_string(v);
  r.report["converged"] = phi.converged;
  r.report["iterations"] = phi.iterations;
  r.report["sup_residual"] = phi.sup_residual;
  r.report["one_minus_phi_at_horizon"] = phi.eta.back();
  json t = json::array(), p = json::array();
  for (int64_t j = 0; j <= grid.J; ++j) {
    t.push_back(grid.t(j));
    p.push_back(phi.phi(j));
  }
  r.report["table"] = {{"t", t}, {"phi", p}, {"one_minus_phi", phi.eta}};
  std::ostringstream os;
  phi.write_csv(os);
  r.csv = os.str();
  r.summary = "verdict=" + std::string(to_string(v)) + " 1-phi(T)=" + fmt(phi.eta.back()) +
              " iterations=" + std::to_string(phi.iterations);
  if (!phi.converged) {
    r.exit_code = kNotConverged;
    r.summary += " (not converged)";
  }
  return r;
}

CommandResult cmd_minsum(const RunConfig& cfg) {
  const auto* cl = std::get_if<Classical>(&cfg.spec);
  if (!cl) throw ConfigError("process.type", "minsum needs a classical process");
  const auto* G = std::get_if<LifetimeLaw>(&cl->G);
  if (!G) throw ConfigError("process.lifetime", "minsum needs a proper lifetime law");
  MinSumOptions opts;
  opts.N = cfg.minsum.N;
  opts.m0_override = cfg.minsum.m0_override;
  const MinSumReport rep = classify_minsum(cl->h, *G, opts);

  CommandResult r;
  r.report = base_report("minsum", cfg);
  r.report.update(rep.to_json());
  std::string csv = "n,term,partial_sum\n";
  for (std::size_t n = 0; n < rep.terms.size(); ++n)
    csv += std::to_string(n + 1) + "," + fmt(rep.terms[n]) + "," + fmt(rep.partial_sums[n]) + "\n";
  r.csv = std::move(csv);
  r.summary = "verdict=" + std::string(to_string(rep.verdict)) + " method=" + to_string(rep.method);
  return r;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  const EmpiricalDistribution ed = empirical_explosion_time(sim_config(cfg, cfg.spec, cfg.sim.master_seed));
  CommandResult r;
  r.report = base_report("simulate", cfg);
  r.report["explosion_time"] = summarize(ed);
  r.report["proxy_times"] = ed.times;
  std::ostringstream os;
  ed.write_csv(os);
  r.csv = os.str();
  r.summary = "exploded=" + std::to_string(ed.times.size()) + "/" + std::to_string(ed.trials);
  return r;
}

CommandResult cmd_compare(const RunConfig& cfg) {
  const auto [fw, bw] = compare_pair(cfg.spec);
  const EmpiricalDistribution upper = empirical_explosion_time(sim_config(cfg, fw, derive_seed(cfg.sim.master_seed, 1)));
  const EmpiricalDistribution lower = empirical_explosion_time(sim_config(cfg, bw, derive_seed(cfg.sim.master_seed, 2)));
  const DominationReport dom = domination_test(lower, upper);

  CommandResult r;
  r.report = base_report("compare", cfg);
  r.report["domination"] = dom.to_json();
  r.report["forward"] = summarize(upper);
  r.report["backward"] = summarize(lower);
  std::string csv = "side,proxy_time,censored\n";
  for (const auto& [name, ed] : {std::pair{"backward", &lower}, std::pair{"forward", &upper}}) {
    for (double t : ed->times) csv += std::string(name) + "," + fmt(t) + ",0\n";
    for (int64_t i = 0; i < ed->censored; ++i) csv += std::string(name) + ",inf,1\n";
  }
  r.csv = std::move(csv);
  r.summary = "violated=" + std::string(dom.violated ? "true" : "false") + " max_gap=" + fmt(dom.max_gap) +
              " critical=" + fmt(dom.critical_value);
  if (dom.violated) r.exit_code = kDominationViolated;
  return r;
}

CommandResult cmd_survival(const RunConfig& cfg) {
  const SurvivalReport s = survival_probability(cfg.spec);
  CommandResult r;
  r.report = base_report("survival", cfg);
  r.report["eta_infinity"] = s.eta_infinity;
  r.report["extinction_q"] = s.extinction_q;
  r.csv = "eta_infinity,extinction_q\n" + fmt(s.eta_infinity) + "," + fmt(s.extinction_q) + "\n";
  r.summary = "eta_infinity=" + fmt(s.eta_infinity);
  return r;
}

void write_result(const CommandResult& r, OutputFormat format, const std::string& path) {
  const std::string body = format == OutputFormat::Csv ? r.csv : r.report.dump(2) + "\n";
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("--out", "cannot write '" + path + "'");
  out << body;
  if (format == OutputFormat::Csv) {
    std::ofstream meta(path + ".meta.json");
    if (!meta) throw ConfigError("--out", "cannot write '" + path + ".meta.json'");
    json m = r.report;
    m.erase("table");
    m.erase("proxy_times");
    meta << m.dump(2) << "\n";
  }
}

}  // namespace agebp::cli
