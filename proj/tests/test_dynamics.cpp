#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "fsps/diagnostics.hpp"
#include "fsps/dynamics.hpp"
#include "fsps/error.hpp"
#include "fsps/io.hpp"
#include "fsps/spectral.hpp"
#include "oracles.hpp"

using namespace fsps;

namespace {

WaveField gaussian(const Grid1D& g, double amp = 1.0, double width = 1.0) {
  return WaveField::sample(
      g, [=](double x) { return Complex{amp * std::exp(-(x / width) * (x / width)), 0.0}; });
}

SimConfig base_config(double half_length = 20.0, std::size_t n = 512) {
  SimConfig c;
  c.grid = make_grid(half_length, n);
  c.store_snapshots = false;
  return c;
}

WaveField evolve(WaveField psi, const SimConfig& cfg, std::size_t steps) {
  SplitStepper stepper(psi.grid, cfg.model(), cfg.dt);
  for (std::size_t n = 0; n < steps; ++n) stepper.step(psi.values);
  return psi;
}

double mass(const WaveField& f) { return lp_norm(f, 2.0); }

}  // namespace

TEST(LocalTerm, CubicPointValue) {
  const auto g = make_grid(1.0, 8);
  WaveField f(g);
  f.values[3] = {2.0, 0.0};
  for (const int alpha : {1, -1}) {
    const auto out = local_term(f, 3.0, alpha);
    EXPECT_DOUBLE_EQ(out.values[3].real(), 8.0 * alpha);
    EXPECT_EQ(out.values[0], Complex{});
  }
}

TEST(LocalTerm, ZeroNodeStaysFiniteBelowQuadratic) {
  const auto g = make_grid(1.0, 8);
  WaveField f(g);
  f.values[1] = {0.5, 0.5};
  const auto out = local_term(f, 1.5, 1);
  EXPECT_EQ(out.values[0], Complex{});
  EXPECT_TRUE(std::isfinite(out.values[1].real()));
  EXPECT_EQ(local_coefficient(Complex{}, 1.5), 0.0);
}

TEST(LocalTerm, ModulusIdentity) {
  const auto g = make_grid(4.0, 256);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  WaveField f(g);
  for (auto& v : f.values) v = {n(rng), n(rng)};
  for (const double gamma : {1.2, 2.0, 3.0, 5.0, 7.0}) {
    const auto out = local_term(f, gamma, -1);
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double expect = std::pow(std::abs(f.values[j]), gamma);
      EXPECT_NEAR(std::abs(out.values[j]), expect, 1e-13 * std::max(1.0, expect));
    }
  }
}

TEST(LocalTerm, RejectsGammaAtMostOne) {
  const auto g = make_grid(1.0, 8);
  EXPECT_THROW(local_term(WaveField(g), 1.0, 1), DomainError);
}

TEST(NonlocalTerm, ZeroField) {
  const auto g = make_grid(3.0, 64);
  for (const auto b : {PoissonBackend::spectral, PoissonBackend::quadrature}) {
    const auto out = nonlocal_term(WaveField(g), RieszOrder(0.5), b);
    for (const auto& v : out.values) EXPECT_EQ(v, Complex{});
  }
}

TEST(NonlocalTerm, PureMeanDensityVanishesInSpectralGauge) {
  const auto g = make_grid(std::numbers::pi, 64);
  const auto f = WaveField::sample(g, [](double x) { return std::polar(1.0, 2.0 * x); });
  const auto out = nonlocal_term(f, RieszOrder(1.0 / 3.0), PoissonBackend::spectral);
  for (const auto& v : out.values) EXPECT_LT(std::abs(v), 1e-14);
}

TEST(NonlocalTerm, QuadratureMatchesDirectSum) {
  const auto g = make_grid(8.0, 256);
  const auto f = WaveField::sample(g, [](double x) { return std::polar(std::exp(-x * x), 0.3 * x); });
  const double s = 1.0 / 3.0;
  const auto out = nonlocal_term(f, RieszOrder(s), PoissonBackend::quadrature);
  std::vector<double> d(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) d[j] = std::norm(f.values[j]);
  const auto a = oracle::direct_riesz_sum(d, g.dx(), s, oracle::frozen_kernel_c(s));
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Complex ref = a[j] * f.values[j];
    num += std::norm(out.values[j] - ref);
    den += std::norm(ref);
  }
  EXPECT_LT(std::sqrt(num / den), 1e-8);
}

TEST(StrangStep, TinyStepIsNearIdentity) {
  auto cfg = base_config();
  cfg.dt = 1e-8;
  const auto f = gaussian(cfg.grid);
  EXPECT_LT(relative_l2_error(strang_step(f, cfg), f), 1e-6);
}

TEST(StrangStep, DisabledNonlinearityIsFreeFlow) {
  auto cfg = base_config();
  cfg.dt = 0.01;
  cfg.nonlocal_enabled = false;
  cfg.local_enabled = false;
  const auto f = WaveField::sample(cfg.grid, [](double x) { return std::polar(std::exp(-x * x), x); });
  EXPECT_LT(relative_l2_error(strang_step(f, cfg), free_propagate(f, 0.01)), 1e-14);
}

TEST(StrangStep, SecondOrderConvergence) {
  auto cfg = base_config(20.0, 512);
  const auto f = gaussian(cfg.grid);
  const double horizon = 0.4;
  auto at = [&](double dt) {
    cfg.dt = dt;
    return evolve(f, cfg, static_cast<std::size_t>(std::llround(horizon / dt)));
  };
  const auto ref = at(0.4 / 1280.0);
  const double e1 = relative_l2_error(at(0.4 / 40.0), ref);
  const double e2 = relative_l2_error(at(0.4 / 80.0), ref);
  const double e3 = relative_l2_error(at(0.4 / 160.0), ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.5);
  EXPECT_NEAR(e2 / e3, 4.0, 0.5);
}

TEST(StrangStep, RejectsNonFiniteInput) {
  auto cfg = base_config(5.0, 64);
  auto f = gaussian(cfg.grid);
  f.values[17] = {std::nan(""), 0.0};
  try {
    strang_step(f, cfg);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_EQ(e.index(), 17u);
  }
}

TEST(Duhamel, FreeFlowConvergesInOneIteration) {
  auto cfg = base_config(10.0, 256);
  cfg.nonlocal_enabled = false;
  cfg.local_enabled = false;
  cfg.dt = 1e-3;
  const auto f = gaussian(cfg.grid);
  const auto r = duhamel_iterate(f, cfg, 0.01, 10, 1e-12);
  EXPECT_EQ(r.status, PicardStatus::converged);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_LT(relative_l2_error(r.psi, free_propagate(f, 0.01)), 1e-13);
}

TEST(Duhamel, SingleIterationIsOneMapApplication) {
  auto cfg = base_config(10.0, 256);
  cfg.dt = 1e-3;
  const auto f = gaussian(cfg.grid);
  const auto r = duhamel_iterate(f, cfg, 0.01, 1, 0.0);
  EXPECT_EQ(r.status, PicardStatus::max_iterations);
  EXPECT_EQ(r.iterations, 1u);
  ASSERT_EQ(r.increments.size(), 1u);
  EXPECT_GT(r.increments[0], 0.0);

  // Independent trapezoid of S(t - s) N(S(s) f) on the same mesh.
  const auto model = cfg.model();
  WaveField acc(cfg.grid);
  for (int m = 0; m <= 10; ++m) {
    const double s = 1e-3 * m;
    const auto term = free_propagate(nonlinearity(free_propagate(f, s), model), 0.01 - s);
    const double w = (m == 0 || m == 10) ? 0.5e-3 : 1e-3;
    for (std::size_t j = 0; j < acc.size(); ++j) acc.values[j] += w * term.values[j];
  }
  WaveField expect = free_propagate(f, 0.01);
  for (std::size_t j = 0; j < acc.size(); ++j) expect.values[j] += Complex{0.0, -1.0} * acc.values[j];
  EXPECT_LT(relative_l2_error(r.psi, expect), 1e-12);
}

TEST(Duhamel, AgreesWithStrangOnShortHorizon) {
  auto cfg = base_config(20.0, 512);
  cfg.dt = 1e-3;
  const auto f = gaussian(cfg.grid);
  const auto r = duhamel_iterate(f, cfg, 10 * cfg.dt, 50, 1e-14);
  EXPECT_EQ(r.status, PicardStatus::converged);
  EXPECT_LT(r.contraction_factor, 1.0);
  const auto s = evolve(f, cfg, 10);
  double num = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) num += std::norm(s.values[j] - r.psi.values[j]);
  EXPECT_LT(std::sqrt(num * cfg.grid.dx()), 1e-6);
}

TEST(Duhamel, Preconditions) {
  auto cfg = base_config(5.0, 64);
  const auto f = gaussian(cfg.grid);
  EXPECT_THROW(duhamel_iterate(f, cfg, 0.0, 5, 1e-10), PreconditionError);
  EXPECT_THROW(duhamel_iterate(f, cfg, 0.01, 0, 1e-10), PreconditionError);
}

TEST(Duhamel, LargeDataReportsContractionFailure) {
  auto cfg = base_config(10.0, 256);
  cfg.gamma = 5.0;
  cfg.alpha = -1;
  cfg.dt = 1e-2;
  const auto f = gaussian(cfg.grid, 6.0, 0.5);
  const auto r = duhamel_iterate(f, cfg, 1.0, 40, 1e-12);
  EXPECT_EQ(r.status, PicardStatus::contraction_failure);
  EXPECT_GE(r.iterations, 4u);
}

TEST(MassConservation, LinearRunTenThousandSteps) {
  auto cfg = base_config(20.0, 256);
  cfg.nonlocal_enabled = false;
  cfg.local_enabled = false;
  cfg.dt = 1e-3;
  const auto f = gaussian(cfg.grid);
  const auto out = evolve(f, cfg, 10000);
  EXPECT_LT(std::abs(mass(out) - mass(f)) / mass(f), 1e-12);
}

TEST(MassConservation, NonlinearConfigurations) {
  for (const double gamma : {2.0, 3.0, 5.0}) {
    for (const int alpha : {1, -1}) {
      auto cfg = base_config(20.0, 256);
      cfg.gamma = gamma;
      cfg.alpha = alpha;
      cfg.dt = 1e-3;
      const auto f = gaussian(cfg.grid, 0.8);
      const auto out = evolve(f, cfg, 2000);
      EXPECT_LT(std::abs(mass(out) - mass(f)) / mass(f), 1e-10) << gamma << " " << alpha;
    }
  }
}

TEST(EnergyConservation, DefocusingCubicShortRun) {
  auto cfg = base_config(20.0, 1024);
  cfg.t_end = 0.5;
  const auto tr = run_simulation(cfg);
  ASSERT_EQ(tr.status, RunStatus::completed);
  const double e0 = tr.diagnostics.front().energy;
  for (const auto& d : tr.diagnostics) EXPECT_LT(std::abs(d.energy - e0) / std::abs(e0), 1e-5);
}

TEST(Momentum, ConservedAlongDefocusingRun) {
  auto cfg = base_config(20.0, 512);
  cfg.t_end = 0.5;
  cfg.initial = ModulatedPulse{1.0, 1.0, 2.0 * std::numbers::pi / 40.0 * 5.0, 0.0};
  const auto tr = run_simulation(cfg);
  const double p0 = tr.diagnostics.front().momentum;
  ASSERT_GT(std::abs(p0), 0.1);
  for (const auto& d : tr.diagnostics) EXPECT_LT(std::abs(d.momentum - p0) / std::abs(p0), 1e-6);
}

TEST(Gauge, ConstantOffsetIsGlobalPhase) {
  for (const auto backend : {PoissonBackend::spectral, PoissonBackend::quadrature}) {
    auto cfg = base_config(20.0, 512);
    cfg.poisson_backend = backend;
    cfg.dt = 1e-3;
    const auto f = WaveField::sample(cfg.grid, [](double x) { return std::polar(std::exp(-x * x), 0.5 * x); });
    auto shifted = cfg;
    shifted.gauge_offset = 3.7;
    const std::size_t steps = 500;
    const auto a = evolve(f, cfg, steps);
    const auto b = evolve(f, shifted, steps);
    const double t = cfg.dt * steps;
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_NEAR(std::abs(a.values[j]), std::abs(b.values[j]), 1e-10);
      EXPECT_NEAR(std::abs(a.values[j] * std::polar(1.0, -3.7 * t) - b.values[j]), 0.0, 1e-10);
    }
    EXPECT_NEAR(mass(a), mass(b), 1e-10);
    EXPECT_NEAR(momentum(a), momentum(b), 1e-10);
    EXPECT_NEAR(h1_norm(a), h1_norm(b), 1e-10);
    EXPECT_NEAR(gradient_norm(a), gradient_norm(b), 1e-10);
  }
}

TEST(Reversibility, LinearForwardThenBackward) {
  auto cfg = base_config(20.0, 512);
  cfg.nonlocal_enabled = false;
  cfg.local_enabled = false;
  cfg.dt = 1e-3;
  const auto f = WaveField::sample(cfg.grid, [](double x) { return std::polar(std::exp(-x * x), x); });
  auto fwd = evolve(f, cfg, 1000);
  auto back_cfg = cfg;
  back_cfg.dt = -cfg.dt;
  const auto back = evolve(fwd, back_cfg, 1000);
  EXPECT_LT(relative_l2_error(back, f), 1e-10);
}

TEST(Reversibility, NonlinearConjugationSymmetry) {
  auto cfg = base_config(20.0, 512);
  cfg.dt = 1e-3;
  const auto f = gaussian(cfg.grid);
  auto psi = evolve(f, cfg, 500);
  for (auto& v : psi.values) v = std::conj(v);
  psi = evolve(psi, cfg, 500);
  for (auto& v : psi.values) v = std::conj(v);
  EXPECT_LT(relative_l2_error(psi, f), 1e-10);
}

TEST(Scaling, CriticalPairTrajectoriesMatch) {
  const double lambda = 2.0;
  const double a = 4.0 / 3.0;
  auto cfg = base_config(16.0, 512);
  cfg.gamma = 2.5;
  cfg.sigma = RieszOrder(2.0 / 3.0);
  cfg.dt = 5e-4;
  auto scaled = cfg;
  scaled.grid = make_grid(16.0 * lambda, 512);
  scaled.dt = cfg.dt * lambda * lambda;
  const auto f = gaussian(cfg.grid, 1.0, 1.0);
  const auto f_scaled = WaveField::sample(scaled.grid, [&](double x) {
    return Complex{std::pow(lambda, -a) * std::exp(-(x / lambda) * (x / lambda)), 0.0};
  });
  const auto psi = evolve(f, cfg, 250);
  const auto psi_scaled = evolve(f_scaled, scaled, 250);
  WaveField mapped(cfg.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) mapped.values[j] = std::pow(lambda, -a) * psi.values[j];
  EXPECT_LT(relative_l2_error(WaveField(cfg.grid, psi_scaled.values), mapped), 1e-3);
}

TEST(Validation, RejectsBadSettings) {
  auto cfg = base_config(5.0, 64);
  const auto f = gaussian(cfg.grid);
  auto expect_message = [&](SimConfig c, const std::string& needle) {
    try {
      validate(c, f);
      FAIL() << needle;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto c = cfg;
  c.gamma = 1.0;
  expect_message(c, "gamma must exceed 1");
  c = cfg;
  c.alpha = 2;
  expect_message(c, "alpha");
  c = cfg;
  c.dt = 2.0;
  expect_message(c, "dt");
  c = cfg;
  c.blowup_h1_cap = 0.5;
  expect_message(c, "blowup_h1_cap");
  c = cfg;
  c.record_every = 0;
  expect_message(c, "record_every");
  EXPECT_THROW(validate(cfg, gaussian(make_grid(5.0, 128))), ConfigError);
  EXPECT_NO_THROW(validate(cfg, f));
}

TEST(Validation, SupercriticalGammaFlagged) {
  SimConfig c;
  c.gamma = 6.0;
  EXPECT_TRUE(c.outside_analysed_range());
  c.gamma = 5.0;
  EXPECT_FALSE(c.outside_analysed_range());
}

TEST(InitialCondition, SnapshotRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "fsps_dyn_snapshot";
  std::filesystem::create_directories(dir);
  const auto g = make_grid(5.0, 64);
  const auto f = WaveField::sample(g, [](double x) { return std::polar(std::exp(-x * x), 0.1 * x); });
  write_snapshot(dir / "s.txt", f, 0.25);
  const auto back = make_initial(SnapshotFile{(dir / "s.txt").string()}, g);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_EQ(back.values[j], f.values[j]);
  EXPECT_THROW(make_initial(SnapshotFile{(dir / "s.txt").string()}, make_grid(5.0, 128)),
               ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(InitialCondition, AmplitudeForNorm) {
  const auto g = make_grid(20.0, 2048);
  const double amp = gaussian_amplitude_for_norm(1.3, 0.7);
  EXPECT_NEAR(mass(gaussian(g, amp, 0.7)), 1.3, 1e-10);
}

TEST(RunSimulation, TrajectoryInvariants) {
  auto cfg = base_config(20.0, 256);
  cfg.dt = 0.01;
  cfg.t_end = 0.95;
  cfg.record_every = 10;
  cfg.store_snapshots = true;
  const auto tr = run_simulation(cfg);
  ASSERT_EQ(tr.status, RunStatus::completed);
  ASSERT_EQ(tr.times.size(), tr.snapshots.size());
  ASSERT_EQ(tr.times.size(), tr.diagnostics.size());
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    EXPECT_GT(tr.times[i], tr.times[i - 1]);
    EXPECT_GE(tr.diagnostics[i].l4linf_accum, tr.diagnostics[i - 1].l4linf_accum);
  }
  EXPECT_GE(tr.times.back(), cfg.t_end - cfg.dt / 2);
}

TEST(RunSimulation, DefocusingCubicStaysBounded) {
  auto cfg = base_config(20.0, 512);
  cfg.dt = 2e-3;
  cfg.t_end = 2.0;
  cfg.record_every = 50;
  const auto tr = run_simulation(cfg);
  ASSERT_EQ(tr.status, RunStatus::completed);
  const double h0 = tr.diagnostics.front().h1;
  for (const auto& d : tr.diagnostics) EXPECT_LT(d.h1, 2.0 * h0);
}

TEST(RunSimulation, FocusingQuinticAboveThresholdHitsCap) {
  auto cfg = base_config(10.0, 2048);
  cfg.gamma = 5.0;
  cfg.alpha = -1;
  cfg.dt = 1e-4;
  cfg.t_end = 0.2;
  cfg.record_every = 100;
  cfg.initial = GaussianPulse{gaussian_amplitude_for_norm(3.0 * critical_threshold(), 0.25), 0.25};
  const double h0 = h1_norm(make_initial(cfg.initial, cfg.grid));
  cfg.blowup_h1_cap = 10.0 * h0;
  const auto tr = run_simulation(cfg);
  ASSERT_EQ(tr.status, RunStatus::blowup_detected) << tr.status_detail;
  EXPECT_NE(tr.status_detail.find("reproduced at dt/2"), std::string::npos);
  EXPECT_LT(tr.status_time, cfg.t_end);

  cfg.confirm_blowup = false;
  const auto quick = run_simulation(cfg);
  EXPECT_EQ(quick.status, RunStatus::blowup_detected);
  EXPECT_EQ(quick.status_detail.find("dt/2"), std::string::npos);
}
