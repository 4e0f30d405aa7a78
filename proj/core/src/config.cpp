#include "agebp/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "agebp/error.hpp"

namespace agebp {

namespace {

using json = nlohmann::json;

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) throw ConfigError(join(where, k), "unknown key");
  }
}

const json& need(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(join(where, key), "missing");
  return j.at(key);
}

double number(const json& j, const std::string& where, const char* key) {
  const json& v = need(j, where, key);
  if (!v.is_number()) throw ConfigError(join(where, key), "expected a number");
  return v.get<double>();
}

template <class T>
void read_positive(const json& j, const std::string& where, const char* key, T& out, bool allow_zero = false) {
  if (!j.contains(key)) return;
  const double v = number(j, where, key);
  if (allow_zero ? !(v >= 0.0) : !(v > 0.0))
    throw ConfigError(join(where, key), allow_zero ? "must be non-negative" : "must be positive");
  if constexpr (std::is_integral_v<T>) {
    if (v != std::floor(v)) throw ConfigError(join(where, key), "must be an integer");
  }
  out = static_cast<T>(v);
}

// Law constructors throw DomainError; report them against the law's field.
template <class F>
auto wrap(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(where, e.what());
  }
}

std::string type_tag(const json& j, const std::string& where) {
  require_object(j, where);
  const json& t = need(j, where, "type");
  if (!t.is_string()) throw ConfigError(join(where, "type"), "expected a string");
  return t.get<std::string>();
}

std::vector<std::pair<double, double>> pairs(const json& j, const std::string& where, const char* key) {
  const json& arr = need(j, where, key);
  const std::string f = join(where, key);
  if (!arr.is_array() || arr.empty()) throw ConfigError(f, "expected a non-empty array of [x, y] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ConfigError(f, "expected [x, y] pairs of numbers");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

const char* format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

}  // namespace

OffspringLaw parse_offspring(const json& j, const std::string& where) {
  const std::string t = type_tag(j, where);
  if (t == "heavy_tail_alpha") {
    allow_keys(j, where, {"type", "alpha"});
    const double a = number(j, where, "alpha");
    return wrap(join(where, "alpha"), [&] { return OffspringLaw::heavy_tail(a); });
  }
  if (t == "log_corrected_alpha") {
    allow_keys(j, where, {"type", "alpha", "beta"});
    const double a = number(j, where, "alpha"), b = number(j, where, "beta");
    return wrap(where, [&] { return OffspringLaw::log_corrected(a, b); });
  }
  if (t == "finite_support") {
    allow_keys(j, where, {"type", "pmf"});
    std::vector<std::pair<int64_t, double>> pmf;
    for (const auto& [k, p] : pairs(j, where, "pmf")) {
      if (k < 0 || k != std::floor(k)) throw ConfigError(join(where, "pmf"), "support points must be integers >= 0");
      pmf.emplace_back(static_cast<int64_t>(k), p);
    }
    return wrap(join(where, "pmf"), [&] { return OffspringLaw::finite(pmf); });
  }
  throw ConfigError(join(where, "type"), "unknown offspring law '" + t + "'");
}

LifetimeLaw parse_lifetime(const json& j, const std::string& where) {
  const std::string t = type_tag(j, where);
  if (t == "exponential") {
    allow_keys(j, where, {"type", "rate"});
    const double r = number(j, where, "rate");
    return wrap(join(where, "rate"), [&] { return LifetimeLaw::exponential(r); });
  }
  if (t == "grey_flat") {
    allow_keys(j, where, {"type", "ell", "beta"});
    const double l = number(j, where, "ell"), b = number(j, where, "beta");
    return wrap(where, [&] { return LifetimeLaw::grey(l, b); });
  }
  if (t == "double_exp_flat") {
    allow_keys(j, where, {"type", "k", "gamma"});
    const double k = number(j, where, "k"), g = number(j, where, "gamma");
    return wrap(where, [&] { return LifetimeLaw::double_exp(k, g); });
  }
  if (t == "uniform") {
    allow_keys(j, where, {"type", "a", "b"});
    const double a = number(j, where, "a"), b = number(j, where, "b");
    return wrap(where, [&] { return LifetimeLaw::uniform(a, b); });
  }
  if (t == "deterministic") {
    allow_keys(j, where, {"type", "c"});
    const double c = number(j, where, "c");
    return wrap(join(where, "c"), [&] { return LifetimeLaw::deterministic(c); });
  }
  if (t == "table") {
    allow_keys(j, where, {"type", "knots"});
    const auto knots = pairs(j, where, "knots");
    return wrap(join(where, "knots"), [&] { return LifetimeLaw::table(knots); });
  }
  throw ConfigError(join(where, "type"), "unknown lifetime law '" + t + "'");
}

ProcessSpec parse_process(const json& j, const std::string& where) {
  const std::string t = type_tag(j, where);
  auto h = [&] { return parse_offspring(need(j, where, "offspring"), join(where, "offspring")); };
  auto G = [&] { return parse_lifetime(need(j, where, "lifetime"), join(where, "lifetime")); };
  auto C = [&] { return parse_lifetime(need(j, where, "contagion"), join(where, "contagion")); };
  auto I = [&] { return parse_lifetime(need(j, where, "incubation"), join(where, "incubation")); };
  if (t == "classical") {
    allow_keys(j, where, {"type", "offspring", "lifetime"});
    return Classical{h(), AgeLaw{G()}};
  }
  if (t == "forward_contagious" || t == "backward_contagious") {
    allow_keys(j, where, {"type", "offspring", "lifetime", "contagion"});
    if (t[0] == 'f') return ForwardContagious{h(), G(), C()};
    return BackwardContagious{h(), G(), C()};
  }
  if (t == "forward_incubation" || t == "backward_incubation") {
    allow_keys(j, where, {"type", "offspring", "lifetime", "incubation"});
    if (t[0] == 'f') return ForwardIncubation{h(), G(), I()};
    return BackwardIncubation{h(), G(), I()};
  }
  throw ConfigError(join(where, "type"), "unknown process type '" + t + "'");
}

RunConfig parse_config(const json& j) {
  require_object(j, "(root)");
  allow_keys(j, "", {"process", "grid", "solver", "sim", "minsum", "output"});
  RunConfig c{need(j, "", "process"), parse_process(j.at("process")), {}, {}, {}, {}, {}};

  auto section = [&](const char* key, std::initializer_list<const char*> keys) -> const json* {
    if (!j.contains(key)) return nullptr;
    require_object(j.at(key), key);
    allow_keys(j.at(key), key, keys);
    return &j.at(key);
  };
  if (const json* s = section("grid", {"dt", "horizon"})) {
    read_positive(*s, "grid", "dt", c.grid.dt);
    read_positive(*s, "grid", "horizon", c.grid.horizon);
  }
  if (const json* s = section("solver", {"tol", "max_iters", "threshold", "threads"})) {
    read_positive(*s, "solver", "tol", c.solver.tol);
    read_positive(*s, "solver", "max_iters", c.solver.max_iters);
    read_positive(*s, "solver", "threshold", c.solver.threshold);
    read_positive(*s, "solver", "threads", c.solver.threads, true);  // 0: all cores
  }
  if (const json* s = section("sim", {"trials", "cap", "master_seed", "horizon", "threads"})) {
    read_positive(*s, "sim", "trials", c.sim.trials);
    read_positive(*s, "sim", "cap", c.sim.cap);
    read_positive(*s, "sim", "horizon", c.sim.horizon);
    read_positive(*s, "sim", "threads", c.sim.threads, true);
    if (s->contains("master_seed")) {
      const json& v = s->at("master_seed");
      if (!v.is_number_unsigned()) throw ConfigError("sim.master_seed", "expected an unsigned integer");
      c.sim.master_seed = v.get<uint64_t>();
    }
  }
  if (const json* s = section("minsum", {"N", "m0_override"})) {
    read_positive(*s, "minsum", "N", c.minsum.N);
    if (s->contains("m0_override") && !s->at("m0_override").is_null()) {
      double m0 = 0.0;
      read_positive(*s, "minsum", "m0_override", m0);
      c.minsum.m0_override = m0;
    }
  }
  if (const json* s = section("output", {"path", "format"})) {
    if (s->contains("path")) {
      if (!s->at("path").is_string()) throw ConfigError("output.path", "expected a string");
      c.output.path = s->at("path").get<std::string>();
    }
    if (s->contains("format")) {
      const json& f = s->at("format");
      if (f == "csv") c.output.format = OutputFormat::Csv;
      else if (f == "json") c.output.format = OutputFormat::Json;
      else throw ConfigError("output.format", "expected \"csv\" or \"json\"");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    // the message carries line and column
    throw ConfigError(path, e.what());
  }
  return parse_config(j);
}

json RunConfig::to_json() const {
  json minsum_j{{"N", minsum.N}};
  minsum_j["m0_override"] = minsum.m0_override ? json(*minsum.m0_override) : json(nullptr);
  return {
      {"process", process},
      {"grid", {{"dt", grid.dt}, {"horizon", grid.horizon}}},
      {"solver",
       {{"tol", solver.tol}, {"max_iters", solver.max_iters}, {"threshold", solver.threshold}, {"threads", solver.threads}}},
      {"sim",
       {{"trials", sim.trials},
        {"cap", sim.cap},
        {"master_seed", sim.master_seed},
        {"horizon", sim.horizon},
        {"threads", sim.threads}}},
      {"minsum", minsum_j},
      {"output", {{"path", output.path}, {"format", format_name(output.format)}}},
  };
}

}  // namespace agebp
