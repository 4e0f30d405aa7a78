#include <gtest/gtest.h>

#include "agebp/config.hpp"
#include "agebp/error.hpp"

using namespace agebp;
using json = nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "process": {"type": "classical",
                "offspring": {"type": "heavy_tail_alpha", "alpha": 0.5},
                "lifetime": {"type": "grey_flat", "ell": 1, "beta": 1}}
  })");
}

std::string field_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalGetsDefaults) {
  const auto c = parse_config(minimal());
  EXPECT_TRUE(std::holds_alternative<Classical>(c.spec));
  EXPECT_EQ(c.grid.dt, 1e-3);
  EXPECT_EQ(c.solver.tol, 1e-8);
  EXPECT_EQ(c.solver.max_iters, 10000);
  EXPECT_EQ(c.sim.cap, 100000);
  EXPECT_EQ(c.minsum.N, 60);
  EXPECT_EQ(c.output.format, OutputFormat::Json);
}

TEST(Config, AllProcessTypes) {
  const char* types[] = {"forward_contagious", "backward_contagious", "forward_incubation", "backward_incubation"};
  for (const char* t : types) {
    json j = minimal();
    j["process"]["type"] = t;
    const bool contagious = std::string(t).find("contagious") != std::string::npos;
    j["process"][contagious ? "contagion" : "incubation"] = {{"type", "exponential"}, {"rate", 1.0}};
    EXPECT_STREQ(spec_type_name(parse_config(j).spec), t);
  }
}

TEST(Config, AllLawTags) {
  const json laws[] = {
      {{"type", "exponential"}, {"rate", 2}},
      {{"type", "grey_flat"}, {"ell", 1}, {"beta", 2}},
      {{"type", "double_exp_flat"}, {"k", 1}, {"gamma", 0.5}},
      {{"type", "uniform"}, {"a", 0}, {"b", 1}},
      {{"type", "deterministic"}, {"c", 0.5}},
      {{"type", "table"}, {"knots", {{0.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}}}},
  };
  for (const auto& l : laws) EXPECT_NO_THROW(parse_lifetime(l)) << l.dump();
  EXPECT_NO_THROW(parse_offspring({{"type", "log_corrected_alpha"}, {"alpha", 0.5}, {"beta", 1}}));
  EXPECT_EQ(parse_offspring({{"type", "finite_support"}, {"pmf", {{0, 0.5}, {2, 0.5}}}}).pgf(0.0), 0.5);
}

TEST(Config, UnknownKeysNameTheField) {
  json j = minimal();
  j["process"]["offspring"]["alpah"] = 0.5;
  EXPECT_EQ(field_of(j), "process.offspring.alpah");
  j = minimal();
  j["solvr"] = json::object();
  EXPECT_EQ(field_of(j), "solvr");
  j = minimal();
  j["grid"] = {{"dt", 0.1}, {"horizn", 1}};
  EXPECT_EQ(field_of(j), "grid.horizn");
}

TEST(Config, MalformedTypeTag) {
  json j = minimal();
  j["process"]["type"] = "clasical";
  EXPECT_EQ(field_of(j), "process.type");
  j = minimal();
  j["process"]["lifetime"]["type"] = "gamma";
  EXPECT_EQ(field_of(j), "process.lifetime.type");
}

TEST(Config, InvalidValues) {
  json j = minimal();
  j["grid"] = {{"dt", -1}};
  EXPECT_EQ(field_of(j), "grid.dt");
  j = minimal();
  j["process"]["offspring"]["alpha"] = 1.5;
  EXPECT_EQ(field_of(j), "process.offspring.alpha");
  j = minimal();
  j["output"] = {{"format", "xml"}};
  EXPECT_EQ(field_of(j), "output.format");
  j = minimal();
  j["sim"] = {{"trials", 2.5}};
  EXPECT_EQ(field_of(j), "sim.trials");
  j = minimal();
  j["process"].erase("lifetime");
  EXPECT_EQ(field_of(j), "process.lifetime");
}

TEST(Config, ResolvedConfigRoundTrips) {
  json j = minimal();
  j["sim"] = {{"master_seed", 12345678901234567ull}, {"trials", 50}};
  j["grid"] = {{"dt", 0.1 + 0.2}};
  j["minsum"] = {{"m0_override", 100}};
  const auto c = parse_config(j);
  const json once = c.to_json();
  const json twice = parse_config(json::parse(once.dump())).to_json();
  EXPECT_EQ(once, twice);
  EXPECT_EQ(twice["grid"]["dt"].get<double>(), 0.1 + 0.2);
  EXPECT_EQ(twice["sim"]["master_seed"].get<uint64_t>(), 12345678901234567ull);
}

TEST(Config, ParseErrorCarriesLocation) {
  const std::string path = ::testing::TempDir() + "/broken.json";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("{\n  \"process\": {,\n}", f);
    std::fclose(f);
  }
  try {
    load_config(path);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), ConfigError);
}
