#include "fsps/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fsps/config.hpp"
#include "fsps/dynamics.hpp"
#include "fsps/error.hpp"
#include "fsps/gronwall.hpp"
#include "fsps/io.hpp"
#include "fsps/region.hpp"

#ifndef FSPS_VERSION
#define FSPS_VERSION "0.0.0"
#endif

namespace fsps {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int exit_code_for(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return kExitOk;
    case RunStatus::blowup_detected:
      return kExitBlowup;
    case RunStatus::numeric_failure:
      return kExitNumericFailure;
  }
  return kExitNumericFailure;
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06zu.txt", index);
  return buf;
}

std::string energy_gauge(const SimConfig& cfg) {
  return cfg.poisson_backend == PoissonBackend::spectral ? "mean-free periodic"
                                                         : "free-space quadrature";
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (n == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
}

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("--param must look like section.key=v1,v2, got '" + spec + "'");
  }
  SweepAxis axis{spec.substr(0, eq), {}};
  std::stringstream rest(spec.substr(eq + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) throw ConfigError("empty value in --param '" + spec + "'");
    axis.values.push_back(item);
  }
  return axis;
}

}  // namespace

const char* tool_version() noexcept { return FSPS_VERSION; }

std::size_t resolve_workers(std::optional<std::size_t> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("FSPS_WORKERS")) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

static int simulate_to(const SimConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const std::string started = utc_now();
  Trajectory tr;
  try {
    tr = run_simulation(cfg);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const InputError& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    std::ostringstream csv;
    write_diagnostics_csv(csv, tr.diagnostics);
    write_file(out_dir / "diagnostics.csv", csv.str());
    json artifacts = {{"diagnostics", "diagnostics.csv"}, {"snapshots", json::array()}};
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
      const auto rel = fs::path("snapshots") / snapshot_name(i);
      write_snapshot(out_dir / rel, tr.snapshots[i], tr.times[i]);
      artifacts["snapshots"].push_back(rel.generic_string());
    }
    json manifest = {
        {"config_hash", config_hash(cfg)},
        {"tool_version", tool_version()},
        {"started_at", started},
        {"finished_at", utc_now()},
        {"status", to_string(tr.status)},
        {"status_time", tr.status_time},
        {"status_detail", tr.status_detail},
        {"steps_taken", tr.steps_taken},
        {"records", tr.times.size()},
        {"energy_gauge", energy_gauge(cfg)},
        {"max_boundary_mass_fraction", tr.max_boundary_mass_fraction},
        {"outside_analysed_gamma_range", cfg.outside_analysed_range()},
        {"artifacts", artifacts},
    };
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (cfg.outside_analysed_range()) log << "warning: gamma > 5 lies outside the analysed range\n";
  if (tr.max_boundary_mass_fraction > 1e-3) {
    log << "warning: boundary mass fraction reached " << format_double(tr.max_boundary_mass_fraction)
        << "; consider a larger L\n";
  }
  log << "status " << to_string(tr.status);
  if (!tr.status_detail.empty()) log << ": " << tr.status_detail;
  log << "\n";
  return exit_code_for(tr.status);
}

int cmd_simulate(const fs::path& config_path, const fs::path& out_dir, std::ostream& log) {
  if (config_path.empty() || !fs::is_regular_file(config_path)) {
    log << "error: config file not found: " << config_path.string() << "\n";
    return kExitUsage;
  }
  SimConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const InputError& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  return simulate_to(cfg, out_dir, log);
}

int cmd_region(const std::string& sigma_grid_spec, const std::string& gamma_grid_spec,
               const fs::path& out_dir, std::size_t workers, std::ostream& log) {
  RegionRaster raster;
  try {
    raster = region_raster(parse_grid_spec(sigma_grid_spec), parse_grid_spec(gamma_grid_spec),
                           workers);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  try {
    std::ostringstream csv;
    write_region_csv(csv, raster);
    write_file(out_dir / "region.csv", csv.str());
    std::ostringstream svg;
    write_region_svg(svg, raster);
    write_file(out_dir / "region.svg", svg.str());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::size_t feasible = 0;
  for (const auto& c : raster.cells) feasible += c.feasible ? 1 : 0;
  log << "cells " << raster.cells.size() << ", feasible " << feasible << "\n";
  for (const auto& b : monotonicity_breaks(raster)) {
    log << "note: gamma=" << to_string(b.gamma) << " infeasible at sigma="
        << to_string(b.infeasible_sigma) << " but feasible at sigma=" << to_string(b.feasible_sigma)
        << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const fs::path& config_template, const std::vector<std::string>& params,
              const fs::path& out_dir, std::size_t workers, std::ostream& log) {
  if (config_template.empty() || !fs::is_regular_file(config_template)) {
    log << "error: config file not found: " << config_template.string() << "\n";
    return kExitUsage;
  }
  std::vector<SweepAxis> axes;
  std::string base_text;
  try {
    for (const auto& p : params) axes.push_back(parse_axis(p));
    base_text = read_file(config_template);
    parse_config(base_text, config_template.parent_path());
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  struct Run {
    std::vector<std::string> values;
    std::string text;
    int code = 0;
    std::string hash;
    std::string message;
  };
  std::vector<Run> runs(total);
  try {
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t rem = i;
      std::string text = base_text;
      std::vector<std::string> values(axes.size());
      for (std::size_t k = axes.size(); k-- > 0;) {
        values[k] = axes[k].values[rem % axes[k].values.size()];
        rem /= axes[k].values.size();
      }
      for (std::size_t k = 0; k < axes.size(); ++k) {
        text = override_config_text(text, axes[k].key, values[k]);
      }
      runs[i].values = std::move(values);
      runs[i].text = std::move(text);
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  const fs::path base_dir = fs::absolute(config_template).parent_path();
  parallel_for(total, workers, [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof(name), "run_%04zu", i);
    const fs::path dir = out_dir / name;
    std::ostringstream run_log;
    try {
      const auto cfg = parse_config(runs[i].text, base_dir);
      runs[i].hash = config_hash(cfg);
      write_file(dir / "config.ini", runs[i].text);
      runs[i].code = simulate_to(cfg, dir, run_log);
    } catch (const Error& e) {
      run_log << "error: " << e.what() << "\n";
      runs[i].code = kExitBadConfig;
    }
    runs[i].message = run_log.str();
  });

  std::ostringstream summary;
  summary << "run";
  for (const auto& a : axes) summary << ',' << a.key;
  summary << ",exit_code,config_hash\n";
  bool all_ran = true;
  for (std::size_t i = 0; i < total; ++i) {
    summary << i;
    for (const auto& v : runs[i].values) summary << ',' << v;
    summary << ',' << runs[i].code << ',' << runs[i].hash << '\n';
    all_ran = all_ran && runs[i].code != kExitBadConfig && runs[i].code != kExitIo;
    log << "run " << i << ": " << runs[i].message;
  }
  try {
    write_file(out_dir / "summary.csv", summary.str());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return all_ran ? kExitOk : kExitBadConfig;
}

int cmd_gronwall(const fs::path& spec_path, const fs::path& out_dir, std::size_t workers,
                 std::optional<std::uint64_t> seed, std::ostream& log) {
  if (spec_path.empty() || !fs::is_regular_file(spec_path)) {
    log << "error: spec file not found: " << spec_path.string() << "\n";
    return kExitUsage;
  }
  EnsembleSpec spec;
  double a_level = 1.0, cp = 4.0, cq = 2.0, t_max = 50.0;
  std::size_t samples = 60;
  try {
    const json j = json::parse(read_file(spec_path));
    spec.count = j.value("count", spec.count);
    spec.mesh_sizes = j.value("mesh_sizes", spec.mesh_sizes);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("crossover")) {
      const auto& c = j.at("crossover");
      a_level = c.value("a_level", a_level);
      if (c.contains("p")) {
        const auto& jp = c.at("p");
        cp = jp.is_string() ? parse_double(jp.get<std::string>()) : jp.get<double>();
      }
      cq = c.value("q", cq);
      t_max = c.value("t_max", t_max);
      samples = c.value("samples", samples);
    }
    for (const auto& [k, v] : j.items()) {
      if (k != "count" && k != "mesh_sizes" && k != "seed" && k != "crossover") {
        throw ConfigError("unknown key '" + k + "' in gronwall spec");
      }
    }
  } catch (const json::exception& e) {
    log << "error: gronwall spec: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  if (seed) spec.seed = *seed;
  spec.workers = workers;

  json report;
  std::size_t violations = 0;
  try {
    const auto rows = run_ensembles(spec);
    report["ensembles"] = json::array();
    for (const auto& r : rows) {
      violations += r.violations;
      report["ensembles"].push_back({{"lemma", r.lemma},
                                     {"cells", r.cells},
                                     {"instances", r.instances},
                                     {"vacuous", r.vacuous},
                                     {"violations", r.violations},
                                     {"worst_ratio", r.worst_ratio}});
    }
    const auto study = crossover_study(a_level, cp, cq, t_max, samples);
    json cross = {{"a_level", study.a_level},
                  {"p", study.p},
                  {"q", study.q},
                  {"crossover_t", study.crossover_t},
                  {"samples", json::array()}};
    for (const auto& s : study.samples) {
      cross["samples"].push_back({{"t", s.t},
                                  {"gamma_bound", s.gamma_infinite ? json("inf") : json(s.gamma_value)},
                                  {"exp_bound", s.exp_value}});
    }
    report["crossover"] = cross;
    report["spot_checks"] = {{"gamma_bound(1,1,0)", gamma_bound(1.0, 1.0, 0.0).value},
                             {"gamma_bound(1,1,1)", gamma_bound(1.0, 1.0, 1.0).value},
                             {"gamma_bound(1,2,1)", gamma_bound(1.0, 2.0, 1.0).value}};
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  report["seed"] = spec.seed;
  report["tool_version"] = tool_version();
  report["violations"] = violations;
  report["pass"] = violations == 0;
  try {
    write_file(out_dir / "gronwall_report.json", report.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  }
  log << "violations " << violations << "\n";
  return violations == 0 ? kExitOk : 1;
}

}  // namespace fsps
