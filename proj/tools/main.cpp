#include <iostream>

#include <CLI11.hpp>

#include "agebp/error.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace agebp;
  CLI::App app{"Age-dependent branching processes: explosion analysis and simulation"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output file (default: config output.path, else stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "Master seed, overrides sim.master_seed");
  app.add_flag("--quiet", quiet, "No summary line on stderr");

  using Cmd = cli::CommandResult (*)(const RunConfig&);
  Cmd cmd = nullptr;
  const std::pair<const char*, Cmd> table[] = {
      {"solve", cli::cmd_solve},       {"minsum", cli::cmd_minsum},     {"simulate", cli::cmd_simulate},
      {"compare", cli::cmd_compare},   {"survival", cli::cmd_survival},
  };
  const char* help[] = {"Solve the fixed-point equation for phi", "Min-summability classification",
                        "Simulate explosion-time proxies", "Backward vs forward domination test",
                        "Survival probability"};
  for (std::size_t i = 0; i < std::size(table); ++i) {
    app.add_subcommand(table[i].first, help[i])->fallthrough()->callback([&, i] { cmd = table[i].second; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kConfigError;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (*seed_opt) cfg.sim.master_seed = seed;
    if (!format.empty()) cfg.output.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    if (!out_path.empty()) cfg.output.path = out_path;
    const cli::CommandResult r = cmd(cfg);
    cli::write_result(r, cfg.output.format, cfg.output.path);
    if (!quiet) std::cerr << r.summary << "\n";
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kConfigError;
  }
}
