#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsps/cli.hpp"
#include "fsps/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fractional Schroedinger-Poisson-Slater simulator"};
  app.set_version_flag("--version", std::string(fsps::tool_version()));
  app.require_subcommand(1);
  app.footer("Config keys (INI sections):\n" + fsps::config_reference() +
             "\nWorkers default to FSPS_WORKERS, then the hardware thread count.\n"
             "simulate exit codes: 0 completed, 2 blow-up detected, 3 numeric failure,\n"
             "64 usage error or missing config, 65 invalid config.");

  std::string config;
  std::string out = ".";
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  std::string sigma_grid = "0.01:0.99:0.01";
  std::string gamma_grid = "1.05:5:0.05";
  std::vector<std::string> params;

  auto common = [&](CLI::App* cmd, const char* config_help) {
    cmd->add_option("--config", config, config_help);
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
    cmd->add_option("--workers", workers, "Worker threads");
    cmd->add_option("--seed", seed, "Seed for random ensembles");
  };
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  common(simulate, "INI run description");
  auto* region = app.add_subcommand("region", "Admissibility raster as CSV and SVG");
  common(region, "Unused");
  region->add_option("--sigma-grid", sigma_grid, "lo:hi:step or comma list")->capture_default_str();
  region->add_option("--gamma-grid", gamma_grid, "lo:hi:step or comma list")->capture_default_str();
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
  common(sweep, "INI template");
  sweep->add_option("--param", params, "section.key=v1,v2 (repeatable)");
  auto* gronwall = app.add_subcommand("gronwall", "Gronwall bound ensembles");
  common(gronwall, "JSON ensemble spec");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fsps::kExitUsage;
  }

  const std::filesystem::path out_dir(out);
  const std::size_t n_workers = fsps::resolve_workers(workers);
  if (*simulate) return fsps::cmd_simulate(config, out_dir, std::cerr);
  if (*region) return fsps::cmd_region(sigma_grid, gamma_grid, out_dir, n_workers, std::cerr);
  if (*sweep) return fsps::cmd_sweep(config, params, out_dir, n_workers, std::cerr);
  return fsps::cmd_gronwall(config, out_dir, n_workers, seed, std::cerr);
}
