#include "fsps/config.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/sha.h>

#include "fsps/error.hpp"
#include "fsps/io.hpp"
#include "fsps/region.hpp"

namespace fsps {

namespace {

namespace pt = boost::property_tree;

struct KeyInfo {
  const char* section;
  const char* key;
  const char* fallback;
  const char* range;
};

constexpr KeyInfo kKeys[] = {
    {"problem", "sigma", "1/3", "real or fraction strictly inside (0,1)"},
    {"problem", "gamma", "3", "real > 1 (above 5 runs outside the analysed range)"},
    {"problem", "alpha", "1", "+1 (defocusing) or -1 (focusing)"},
    {"grid", "L", "20", "real > 0, domain [-L, L)"},
    {"grid", "N", "1024", "power of two >= 8"},
    {"time", "dt", "0.001", "real > 0, below t_end"},
    {"time", "t_end", "1", "real > 0"},
    {"time", "record_every", "1", "integer >= 1"},
    {"initial", "kind", "gaussian", "gaussian | modulated | from_file"},
    {"initial", "amplitude", "1", "real; exclusive with l2_norm"},
    {"initial", "l2_norm", "", "real > 0; sets amplitude from the L2 norm"},
    {"initial", "width", "1", "real > 0"},
    {"initial", "chirp", "0", "real (gaussian only)"},
    {"initial", "center", "0", "real"},
    {"initial", "wavenumber", "0", "real (modulated only)"},
    {"initial", "path", "", "snapshot file (from_file only)"},
    {"numerics", "backend", "spectral", "spectral | quadrature"},
    {"numerics", "blowup_h1_cap", "1000000", "real above the initial H1 norm"},
    {"numerics", "tol", "1e-12", "real > 0, Picard increment tolerance"},
    {"numerics", "confirm_blowup", "true", "true | false"},
    {"output", "snapshots", "true", "true | false"},
};

const KeyInfo& info(const std::string& section, const std::string& key) {
  for (const auto& k : kKeys) {
    if (section == k.section && key == k.key) return k;
  }
  throw ConfigError("unknown key [" + section + "] " + key);
}

[[noreturn]] void fail(const KeyInfo& k, const std::string& what) {
  throw ConfigError("[" + std::string(k.section) + "] " + k.key + ": " + what +
                    " (accepted: " + k.range + ")");
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
      if (!body.data().empty() && body.empty()) {
        throw ConfigError("key '" + section + "' must belong to a section");
      }
      for (const auto& [key, value] : body) {
        info(section, key);
        values_[section + "." + key] = value.data();
      }
    }
  }

  bool has(const KeyInfo& k) const { return values_.count(dotted(k)) != 0; }

  std::string text(const KeyInfo& k) const {
    const auto it = values_.find(dotted(k));
    return it == values_.end() ? k.fallback : it->second;
  }

  double real(const KeyInfo& k) const {
    const std::string t = text(k);
    double v = 0.0;
    try {
      v = t.find('/') != std::string::npos ? to_double(parse_rational(t)) : parse_double(t);
    } catch (const Error&) {
      fail(k, "not a number: '" + t + "'");
    }
    if (!std::isfinite(v)) fail(k, "must be finite");
    return v;
  }

  long long integer(const KeyInfo& k) const {
    const std::string t = text(k);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      fail(k, "not an integer: '" + t + "'");
    }
    if (used != t.size()) fail(k, "not an integer: '" + t + "'");
    return v;
  }

  bool boolean(const KeyInfo& k) const {
    const std::string t = text(k);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    fail(k, "not a boolean: '" + t + "'");
  }

 private:
  static std::string dotted(const KeyInfo& k) { return std::string(k.section) + "." + k.key; }
  std::map<std::string, std::string> values_;
};

const KeyInfo& key(const char* section, const char* name) { return info(section, name); }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  std::ostringstream os;
  for (const unsigned char c : digest) os << std::hex << std::setw(2) << std::setfill('0') << int(c);
  return os.str();
}

const char* backend_name(PoissonBackend b) {
  return b == PoissonBackend::spectral ? "spectral" : "quadrature";
}

}  // namespace

SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config syntax error at line " + std::to_string(e.line()) + ": " +
                      e.message());
  }
  const Reader r(tree);
  SimConfig cfg;

  const auto& k_sigma = key("problem", "sigma");
  const double sigma = r.real(k_sigma);
  if (!(sigma > 0.0 && sigma < 1.0)) fail(k_sigma, "sigma must lie strictly inside (0,1)");
  cfg.sigma = RieszOrder(sigma);

  const auto& k_gamma = key("problem", "gamma");
  cfg.gamma = r.real(k_gamma);
  if (!(cfg.gamma > 1.0)) fail(k_gamma, "gamma must exceed 1");

  const auto& k_alpha = key("problem", "alpha");
  const double alpha = r.real(k_alpha);
  if (alpha != 1.0 && alpha != -1.0) fail(k_alpha, "alpha must be +1 or -1");
  cfg.alpha = static_cast<int>(alpha);

  const auto& k_l = key("grid", "L");
  const double half_length = r.real(k_l);
  if (!(half_length > 0.0)) fail(k_l, "L must be positive");
  const auto& k_n = key("grid", "N");
  const long long n = r.integer(k_n);
  if (n < 8 || (n & (n - 1)) != 0) fail(k_n, "N must be a power of two >= 8");
  cfg.grid = Grid1D(half_length, static_cast<std::size_t>(n));

  const auto& k_dt = key("time", "dt");
  cfg.dt = r.real(k_dt);
  if (!(cfg.dt > 0.0)) fail(k_dt, "dt must be positive");
  const auto& k_tend = key("time", "t_end");
  cfg.t_end = r.real(k_tend);
  if (!(cfg.t_end > 0.0)) fail(k_tend, "t_end must be positive");
  if (!(cfg.dt < cfg.t_end)) fail(k_dt, "dt must be smaller than t_end");
  const auto& k_rec = key("time", "record_every");
  const long long every = r.integer(k_rec);
  if (every < 1) fail(k_rec, "record_every must be >= 1");
  cfg.record_every = static_cast<std::size_t>(every);

  const auto& k_kind = key("initial", "kind");
  const std::string kind = r.text(k_kind);
  const auto& k_amp = key("initial", "amplitude");
  const auto& k_l2 = key("initial", "l2_norm");
  const auto& k_width = key("initial", "width");
  const auto& k_chirp = key("initial", "chirp");
  const auto& k_wave = key("initial", "wavenumber");
  const auto& k_path = key("initial", "path");
  const auto& k_center = key("initial", "center");
  if (kind == "gaussian" || kind == "modulated") {
    if (r.has(k_path)) fail(k_path, "only valid with kind = from_file");
    if (kind == "gaussian" && r.has(k_wave)) fail(k_wave, "only valid with kind = modulated");
    if (kind == "modulated" && r.has(k_chirp)) fail(k_chirp, "only valid with kind = gaussian");
    const double width = r.real(k_width);
    if (!(width > 0.0)) fail(k_width, "width must be positive");
    double amplitude = r.real(k_amp);
    if (r.has(k_l2)) {
      if (r.has(k_amp)) fail(k_l2, "give either amplitude or l2_norm, not both");
      const double l2 = r.real(k_l2);
      if (!(l2 > 0.0)) fail(k_l2, "l2_norm must be positive");
      amplitude = gaussian_amplitude_for_norm(l2, width);
    }
    if (kind == "gaussian") {
      cfg.initial = GaussianPulse{amplitude, width, r.real(k_chirp), r.real(k_center)};
    } else {
      cfg.initial = ModulatedPulse{amplitude, width, r.real(k_wave), r.real(k_center)};
    }
  } else if (kind == "from_file") {
    for (const auto* k : {&k_amp, &k_l2, &k_width, &k_chirp, &k_wave, &k_center}) {
      if (r.has(*k)) fail(*k, "not valid with kind = from_file");
    }
    std::filesystem::path path = r.text(k_path);
    if (path.empty()) fail(k_path, "path is required with kind = from_file");
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    cfg.initial = SnapshotFile{path.string()};
  } else {
    fail(k_kind, "unknown kind '" + kind + "'");
  }

  const auto& k_backend = key("numerics", "backend");
  const std::string backend = r.text(k_backend);
  if (backend == "spectral") {
    cfg.poisson_backend = PoissonBackend::spectral;
  } else if (backend == "quadrature") {
    cfg.poisson_backend = PoissonBackend::quadrature;
  } else {
    fail(k_backend, "unknown backend '" + backend + "'");
  }
  const auto& k_cap = key("numerics", "blowup_h1_cap");
  cfg.blowup_h1_cap = r.real(k_cap);
  if (!(cfg.blowup_h1_cap > 0.0)) fail(k_cap, "blowup_h1_cap must be positive");
  const auto& k_tol = key("numerics", "tol");
  cfg.picard_tol = r.real(k_tol);
  if (!(cfg.picard_tol > 0.0)) fail(k_tol, "tol must be positive");
  cfg.confirm_blowup = r.boolean(key("numerics", "confirm_blowup"));
  cfg.store_snapshots = r.boolean(key("output", "snapshots"));
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw InputError("config file not found: " + path.string());
  }
  return parse_config(read_file(path), path.parent_path());
}

std::string canonical_config(const SimConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["problem.sigma"] = format_double(cfg.sigma.value());
  kv["problem.gamma"] = format_double(cfg.gamma);
  kv["problem.alpha"] = std::to_string(cfg.alpha);
  kv["grid.L"] = format_double(cfg.grid.half_length());
  kv["grid.N"] = std::to_string(cfg.grid.size());
  kv["time.dt"] = format_double(cfg.dt);
  kv["time.t_end"] = format_double(cfg.t_end);
  kv["time.record_every"] = std::to_string(cfg.record_every);
  if (const auto* g = std::get_if<GaussianPulse>(&cfg.initial)) {
    kv["initial.kind"] = "gaussian";
    kv["initial.amplitude"] = format_double(g->amplitude);
    kv["initial.width"] = format_double(g->width);
    kv["initial.chirp"] = format_double(g->chirp);
    kv["initial.center"] = format_double(g->center);
  } else if (const auto* m = std::get_if<ModulatedPulse>(&cfg.initial)) {
    kv["initial.kind"] = "modulated";
    kv["initial.amplitude"] = format_double(m->amplitude);
    kv["initial.width"] = format_double(m->width);
    kv["initial.wavenumber"] = format_double(m->wavenumber);
    kv["initial.center"] = format_double(m->center);
  } else {
    kv["initial.kind"] = "from_file";
    kv["initial.path"] = std::get<SnapshotFile>(cfg.initial).path;
  }
  kv["numerics.backend"] = backend_name(cfg.poisson_backend);
  kv["numerics.blowup_h1_cap"] = format_double(cfg.blowup_h1_cap);
  kv["numerics.tol"] = format_double(cfg.picard_tol);
  kv["numerics.confirm_blowup"] = cfg.confirm_blowup ? "true" : "false";
  kv["output.snapshots"] = cfg.store_snapshots ? "true" : "false";
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string config_hash(const SimConfig& cfg) { return sha256_hex(canonical_config(cfg)); }

std::string config_reference() {
  std::ostringstream os;
  std::string section;
  for (const auto& k : kKeys) {
    if (section != k.section) {
      section = k.section;
      os << "[" << section << "]\n";
    }
    os << "  " << std::left << std::setw(15) << k.key << " default "
       << (std::string(k.fallback).empty() ? "-" : k.fallback) << "; " << k.range << "\n";
  }
  return os.str();
}

std::string override_config_text(const std::string& text, const std::string& dotted_key,
                                 const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("parameter must be section.key, got '" + dotted_key + "'");
  }
  const std::string section = dotted_key.substr(0, dot);
  const std::string name = dotted_key.substr(dot + 1);
  info(section, name);
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config syntax error at line " + std::to_string(e.line()) + ": " +
                      e.message());
  }
  tree.put(pt::ptree::path_type(section + "/" + name, '/'), value);
  std::ostringstream out;
  pt::write_ini(out, tree);
  return out.str();
}

}  // namespace fsps
