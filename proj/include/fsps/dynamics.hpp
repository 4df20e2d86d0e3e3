#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "fsps/diagnostics.hpp"
#include "fsps/fourier.hpp"
#include "fsps/grid.hpp"
#include "fsps/nonlinearity.hpp"
#include "fsps/riesz.hpp"

namespace fsps {

/// amplitude * exp(-((x - center)/width)^2) * exp(i chirp (x - center)^2)
struct GaussianPulse {
  double amplitude = 1.0;
  double width = 1.0;
  double chirp = 0.0;
  double center = 0.0;
};

/// amplitude * exp(-((x - center)/width)^2) * exp(i wavenumber x)
struct ModulatedPulse {
  double amplitude = 1.0;
  double width = 1.0;
  double wavenumber = 0.0;
  double center = 0.0;
};

/// Snapshot file written by write_snapshot; its grid must match the run grid.
struct SnapshotFile {
  std::string path;
};

using InitialCondition = std::variant<GaussianPulse, ModulatedPulse, SnapshotFile>;

WaveField make_initial(const InitialCondition& initial, const Grid1D& grid);

/// Gaussian amplitude giving ||A exp(-(x/w)^2)||_2 = l2_norm on the line.
double gaussian_amplitude_for_norm(double l2_norm, double width);

struct SimConfig {
  RieszOrder sigma{1.0 / 3.0};
  double gamma = 3.0;
  int alpha = 1;
  Grid1D grid{20.0, 1024};
  double dt = 1e-3;
  double t_end = 1.0;
  InitialCondition initial = GaussianPulse{};
  PoissonBackend poisson_backend = PoissonBackend::spectral;
  double blowup_h1_cap = 1e6;
  std::size_t record_every = 1;

  /// Picard increment tolerance used by duhamel_iterate callers.
  double picard_tol = 1e-12;
  /// Re-run at dt/2 before labelling a cap excursion as blow-up.
  bool confirm_blowup = true;
  bool store_snapshots = true;

  // Reference-run switches.
  bool nonlocal_enabled = true;
  bool local_enabled = true;
  double gauge_offset = 0.0;

  NonlinearModel model() const;
  std::size_t step_count() const;
  bool outside_analysed_range() const noexcept { return gamma > 5.0; }
};

/// Throws ConfigError for inconsistent settings. The H1 cap is checked against `initial`.
void validate(const SimConfig& cfg, const WaveField& initial);

enum class RunStatus { completed, blowup_detected, numeric_failure };

const char* to_string(RunStatus s) noexcept;

struct Trajectory {
  SimConfig config;
  std::vector<double> times;
  std::vector<WaveField> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
  RunStatus status = RunStatus::completed;
  double status_time = 0.0;
  std::string status_detail;
  std::size_t steps_taken = 0;
  double max_boundary_mass_fraction = 0.0;
};

struct StepInfo {
  double h1 = 0.0;
  bool finite = true;
};

/// Strang splitting S(dt/2) o exp(-i dt (A0 + alpha |Psi|^(gamma-1))) o S(dt/2).
///
/// A0 is recomputed from the mid state; since the potential is real, the
/// nonlinear substep leaves |Psi| unchanged. Holds scratch buffers and is not
/// meant to be shared between threads.
class SplitStepper {
 public:
  SplitStepper(const Grid1D& grid, const NonlinearModel& model, double dt);

  /// Advances psi in place by one step and reports the H1 norm of the result.
  StepInfo step(std::vector<Complex>& psi);

 private:
  Grid1D grid_;
  NonlinearModel model_;
  double dt_;
  FourierTransform fft_;
  PoissonSolver poisson_;
  std::vector<Complex> half_step_;  // exp(-i xi^2 dt/4) / N, FFT order
  std::vector<double> h1_weight_;   // (1 + xi^2) dx / N
  std::vector<double> density_;
  std::vector<double> potential_;
};

/// One Strang step of cfg.dt.
WaveField strang_step(const WaveField& psi, const SimConfig& cfg);

enum class PicardStatus { converged, max_iterations, contraction_failure };

struct DuhamelResult {
  WaveField psi;
  PicardStatus status = PicardStatus::converged;
  std::size_t iterations = 0;
  /// sup over the inner mesh of ||Psi_{k+1}(t) - Psi_k(t)||_2, one entry per iteration.
  std::vector<double> increments;
  /// Ratio of the last two increments (0 when fewer than two are available).
  double contraction_factor = 0.0;
};

/// Picard iteration of the Duhamel map seeded with S(t) f, trapezoid rule on a
/// uniform inner mesh of step close to cfg.dt.
DuhamelResult duhamel_iterate(const WaveField& f, const SimConfig& cfg, double horizon,
                              std::size_t max_iter, double tol);

/// Integrates from 0 to t_end. Reports blow-up and numeric failure as statuses;
/// only configuration errors throw.
Trajectory run_simulation(const SimConfig& cfg);

}  // namespace fsps
