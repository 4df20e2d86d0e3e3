#include "fsps/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fsps/error.hpp"
#include "fsps/io.hpp"
#include "fsps/spectral.hpp"

namespace fsps {

namespace {

std::string num(double v) { return format_double(v); }

double max_modulus(std::span<const Complex> psi) {
  double m = 0.0;
  for (const auto& v : psi) m = std::max(m, std::norm(v));
  return std::sqrt(m);
}

double l2_distance(std::span<const Complex> a, std::span<const Complex> b, double dx) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
  return std::sqrt(s * dx);
}

// Writes (A0 + offset + alpha |psi|^(gamma-1)) psi into out.
class NonlinearityEvaluator {
 public:
  NonlinearityEvaluator(const Grid1D& grid, const NonlinearModel& model)
      : model_(model),
        poisson_(grid, model.sigma, model.backend),
        density_(grid.size()),
        potential_(grid.size(), 0.0) {}

  void operator()(std::span<const Complex> psi, std::span<Complex> out) {
    if (model_.nonlocal_enabled) {
      for (std::size_t j = 0; j < psi.size(); ++j) density_[j] = std::norm(psi[j]);
      poisson_.solve(density_, potential_);
    }
    const double alpha = model_.local_enabled ? static_cast<double>(model_.alpha) : 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const double v = potential_[j] + model_.gauge_offset +
                       alpha * local_coefficient(psi[j], model_.gamma);
      out[j] = v * psi[j];
    }
  }

 private:
  NonlinearModel model_;
  PoissonSolver poisson_;
  std::vector<double> density_;
  std::vector<double> potential_;
};

bool blowup_reproduced_at_half_step(const SimConfig& cfg, double t_star) {
  SimConfig fine = cfg;
  fine.dt = 0.5 * cfg.dt;
  fine.t_end = t_star + cfg.dt;
  fine.confirm_blowup = false;
  fine.store_snapshots = false;
  fine.record_every = std::numeric_limits<std::size_t>::max();
  return run_simulation(fine).status != RunStatus::completed;
}

}  // namespace

double gaussian_amplitude_for_norm(double l2_norm, double width) {
  return l2_norm / std::sqrt(width * std::sqrt(0.5 * std::numbers::pi));
}

WaveField make_initial(const InitialCondition& initial, const Grid1D& grid) {
  const Complex i{0.0, 1.0};
  if (const auto* g = std::get_if<GaussianPulse>(&initial)) {
    if (!(g->width > 0.0)) throw ConfigError("[initial] width must be positive");
    return WaveField::sample(grid, [g, i](double x) {
      const double y = x - g->center;
      return g->amplitude * std::exp(-(y / g->width) * (y / g->width)) *
             std::exp(i * (g->chirp * y * y));
    });
  }
  if (const auto* m = std::get_if<ModulatedPulse>(&initial)) {
    if (!(m->width > 0.0)) throw ConfigError("[initial] width must be positive");
    return WaveField::sample(grid, [m, i](double x) {
      const double y = x - m->center;
      return m->amplitude * std::exp(-(y / m->width) * (y / m->width)) *
             std::exp(i * (m->wavenumber * x));
    });
  }
  const auto& file = std::get<SnapshotFile>(initial);
  auto snap = read_snapshot(file.path);
  if (!(snap.field.grid == grid)) {
    throw ConfigError("[initial] snapshot " + file.path + " has N=" +
                      std::to_string(snap.field.size()) + ", L=" +
                      num(snap.field.grid.half_length()) + "; run grid has N=" +
                      std::to_string(grid.size()) + ", L=" + num(grid.half_length()));
  }
  return WaveField(grid, std::move(snap.field.values));
}

NonlinearModel SimConfig::model() const {
  NonlinearModel m;
  m.sigma = sigma;
  m.gamma = gamma;
  m.alpha = alpha;
  m.backend = poisson_backend;
  m.nonlocal_enabled = nonlocal_enabled;
  m.local_enabled = local_enabled;
  m.gauge_offset = gauge_offset;
  return m;
}

std::size_t SimConfig::step_count() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t_end / dt)));
}

void validate(const SimConfig& cfg, const WaveField& initial) {
  if (!(cfg.gamma > 1.0)) throw ConfigError("[problem] gamma: gamma must exceed 1");
  if (cfg.alpha != 1 && cfg.alpha != -1) {
    throw ConfigError("[problem] alpha: alpha must be +1 or -1");
  }
  if (!(cfg.dt > 0.0)) throw ConfigError("[time] dt: dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("[time] t_end: t_end must be positive");
  if (!(cfg.dt < cfg.t_end)) throw ConfigError("[time] dt: dt must be smaller than t_end");
  if (cfg.record_every < 1) throw ConfigError("[time] record_every: must be >= 1");
  if (!(initial.grid == cfg.grid)) throw ConfigError("initial field lives on a different grid");
  const auto bad = first_non_finite(initial.values);
  if (bad != initial.size()) throw ConfigError("[initial] initial field has non-finite samples");
  const double h1 = h1_norm(initial);
  if (!(cfg.blowup_h1_cap > h1)) {
    throw ConfigError("[numerics] blowup_h1_cap: must exceed the initial H1 norm " + num(h1) +
                      ", got " + num(cfg.blowup_h1_cap));
  }
}

const char* to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::blowup_detected:
      return "blowup_detected";
    case RunStatus::numeric_failure:
      return "numeric_failure";
  }
  return "unknown";
}

SplitStepper::SplitStepper(const Grid1D& grid, const NonlinearModel& model, double dt)
    : grid_(grid),
      model_(model),
      dt_(dt),
      fft_(grid.size()),
      poisson_(grid, model.sigma, model.backend),
      half_step_(grid.size()),
      h1_weight_(grid.size()),
      density_(grid.size()),
      potential_(grid.size(), 0.0) {
  const auto xi = grid.fft_frequencies();
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    half_step_[k] = std::polar(inv_n, -0.25 * xi[k] * xi[k] * dt);
    h1_weight_[k] = (1.0 + xi[k] * xi[k]) * grid.dx() * inv_n;
  }
}

StepInfo SplitStepper::step(std::vector<Complex>& psi) {
  const std::size_t n = psi.size();
  fft_.forward(psi);
  for (std::size_t k = 0; k < n; ++k) psi[k] *= half_step_[k];
  fft_.backward(psi);

  if (model_.nonlocal_enabled) {
    for (std::size_t j = 0; j < n; ++j) density_[j] = std::norm(psi[j]);
    poisson_.solve(density_, potential_);
  }
  const double alpha = model_.local_enabled ? static_cast<double>(model_.alpha) : 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v =
        potential_[j] + model_.gauge_offset + alpha * local_coefficient(psi[j], model_.gamma);
    psi[j] *= std::polar(1.0, -dt_ * v);
  }

  fft_.forward(psi);
  StepInfo info;
  for (std::size_t k = 0; k < n; ++k) {
    info.h1 += h1_weight_[k] * std::norm(psi[k]);
    psi[k] *= half_step_[k];
  }
  fft_.backward(psi);
  info.h1 = std::sqrt(info.h1);
  info.finite = std::isfinite(info.h1);
  return info;
}

WaveField strang_step(const WaveField& psi, const SimConfig& cfg) {
  const auto bad = first_non_finite(psi.values);
  if (bad != psi.size()) throw NumericError("strang_step: non-finite input", bad);
  SplitStepper stepper(psi.grid, cfg.model(), cfg.dt);
  WaveField out = psi;
  if (!stepper.step(out.values).finite) out.diverged = true;
  return out;
}

DuhamelResult duhamel_iterate(const WaveField& f, const SimConfig& cfg, double horizon,
                              std::size_t max_iter, double tol) {
  if (!(horizon > 0.0)) throw PreconditionError("duhamel_iterate: horizon must be positive");
  if (max_iter < 1) throw PreconditionError("duhamel_iterate: max_iter must be >= 1");
  const auto bad = first_non_finite(f.values);
  if (bad != f.size()) throw NumericError("duhamel_iterate: non-finite input", bad);

  const Grid1D& grid = f.grid;
  const std::size_t n = grid.size();
  const std::size_t steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(horizon / cfg.dt)));
  const double h = horizon / static_cast<double>(steps);
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto xi = grid.fft_frequencies();
  FourierTransform fft(n);
  NonlinearityEvaluator nonlinear(grid, cfg.model());

  std::vector<Complex> f_hat = f.values;
  fft.forward(f_hat);

  auto time_of = [h](std::size_t m) { return h * static_cast<double>(m); };
  // physical <- S(t) applied to a raw (FFT-ordered, unnormalized) spectrum
  auto propagate = [&](std::span<const Complex> spec, double t, std::span<Complex> out) {
    for (std::size_t k = 0; k < n; ++k) {
      out[k] = spec[k] * std::polar(inv_n, -0.5 * xi[k] * xi[k] * t);
    }
    fft.backward(out);
  };

  std::vector<std::vector<Complex>> current(steps + 1, std::vector<Complex>(n));
  std::vector<std::vector<Complex>> next(steps + 1, std::vector<Complex>(n));
  for (std::size_t m = 0; m <= steps; ++m) propagate(f_hat, time_of(m), current[m]);

  DuhamelResult result{f, PicardStatus::max_iterations, 0, {}, 0.0};
  std::vector<Complex> integral(n);
  std::vector<Complex> g_prev(n);
  std::vector<Complex> g_curr(n);
  std::vector<Complex> work(n);
  const Complex minus_i{0.0, -1.0};
  std::size_t growth_streak = 0;

  // g <- S(-t) N(psi(t)) as a raw spectrum
  auto pulled_back = [&](std::span<const Complex> psi, double t, std::span<Complex> g) {
    nonlinear(psi, g);
    fft.forward(g);
    for (std::size_t k = 0; k < n; ++k) g[k] *= std::polar(1.0, 0.5 * xi[k] * xi[k] * t);
  };

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    std::fill(integral.begin(), integral.end(), Complex{});
    next[0] = f.values;
    pulled_back(current[0], 0.0, g_prev);
    double increment = 0.0;
    for (std::size_t m = 1; m <= steps; ++m) {
      pulled_back(current[m], time_of(m), g_curr);
      for (std::size_t k = 0; k < n; ++k) {
        integral[k] += 0.5 * h * (g_prev[k] + g_curr[k]);
        work[k] = f_hat[k] + minus_i * integral[k];
      }
      propagate(work, time_of(m), next[m]);
      increment = std::max(increment, l2_distance(next[m], current[m], grid.dx()));
      std::swap(g_prev, g_curr);
    }
    std::swap(current, next);
    result.iterations = iter;
    result.increments.push_back(increment);
    const std::size_t count = result.increments.size();
    if (count >= 2) {
      const double prev = result.increments[count - 2];
      result.contraction_factor = prev > 0.0 ? increment / prev : 0.0;
      growth_streak = increment > prev ? growth_streak + 1 : 0;
    }
    if (!std::isfinite(increment) || growth_streak >= 3) {
      result.status = PicardStatus::contraction_failure;
      break;
    }
    if (increment <= tol) {
      result.status = PicardStatus::converged;
      break;
    }
  }
  result.psi = WaveField(grid, current[steps]);
  return result;
}

Trajectory run_simulation(const SimConfig& cfg) {
  const WaveField initial = make_initial(cfg.initial, cfg.grid);
  validate(cfg, initial);

  Trajectory tr;
  tr.config = cfg;
  const NonlinearModel model = cfg.model();
  SplitStepper stepper(cfg.grid, model, cfg.dt);
  L4LinfAccumulator accum;
  const std::size_t total_steps = cfg.step_count();

  WaveField psi = initial;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.diagnostics.push_back(evaluate_diagnostics(psi, model, t, accum));
    tr.max_boundary_mass_fraction =
        std::max(tr.max_boundary_mass_fraction, boundary_mass_fraction(psi));
    if (cfg.store_snapshots) tr.snapshots.push_back(psi);
  };
  record(0.0);

  for (std::size_t n = 0; n < total_steps; ++n) {
    accum.add_sup(max_modulus(psi.values), cfg.dt);
    const StepInfo info = stepper.step(psi.values);
    const double t = cfg.dt * static_cast<double>(n + 1);
    tr.steps_taken = n + 1;
    if (!info.finite || first_non_finite(psi.values) != psi.size()) {
      tr.status = RunStatus::numeric_failure;
      tr.status_time = t;
      tr.status_detail = "non-finite values at t=" + num(t);
      return tr;
    }
    if (info.h1 > cfg.blowup_h1_cap) {
      tr.status_time = t;
      const std::string what = "H1 norm " + num(info.h1) + " exceeded cap " +
                               num(cfg.blowup_h1_cap) + " at t=" + num(t);
      if (!cfg.confirm_blowup || blowup_reproduced_at_half_step(cfg, t)) {
        tr.status = RunStatus::blowup_detected;
        tr.status_detail = cfg.confirm_blowup ? what + "; reproduced at dt/2" : what;
      } else {
        tr.status = RunStatus::numeric_failure;
        tr.status_detail = what + "; not reproduced at dt/2 (under-resolved step)";
      }
      record(t);
      return tr;
    }
    if ((n + 1) % cfg.record_every == 0 || n + 1 == total_steps) record(t);
  }
  tr.status = RunStatus::completed;
  tr.status_time = tr.times.back();
  return tr;
}

}  // namespace fsps
