#include "fsps/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fsps/error.hpp"
#include "fsps/spectral.hpp"

namespace fsps {

EnergyParts energy_parts(const WaveField& psi, const NonlinearModel& model) {
  EnergyParts parts;
  const double g = gradient_norm(psi);
  parts.kinetic = 0.25 * g * g;
  const double dx = psi.grid.dx();
  if (model.nonlocal_enabled || model.gauge_offset != 0.0) {
    const auto a0 = interaction_potential(psi, model);
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) s += a0.values[j] * std::norm(psi.values[j]);
    parts.interaction = 0.25 * s * dx;
  }
  if (model.local_enabled) {
    double s = 0.0;
    for (const auto& v : psi.values) s += std::pow(std::abs(v), model.gamma + 1.0);
    parts.local = static_cast<double>(model.alpha) / (model.gamma + 1.0) * s * dx;
  }
  return parts;
}

double energy(const WaveField& psi, const NonlinearModel& model) {
  return energy_parts(psi, model).total();
}

double momentum(const WaveField& psi) {
  const auto g = gradient(psi);
  double s = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) s += (g.values[j] * std::conj(psi.values[j])).imag();
  return s * psi.grid.dx();
}

double oscillation_speed(const WaveField& psi, const NonlinearModel& model) {
  const auto laplacian = apply_multiplier(psi, [](double xi) { return Complex{-xi * xi, 0.0}; });
  const auto rhs = nonlinearity(psi, model);
  const Complex i{0.0, 1.0};
  double s = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Complex dpsi_dt = i * (0.5 * laplacian.values[j] - rhs.values[j]);
    s += (std::conj(psi.values[j]) * dpsi_dt).imag();
  }
  return s * psi.grid.dx();
}

void L4LinfAccumulator::add(const WaveField& psi, double dt) {
  add_sup(lp_norm(psi, std::numeric_limits<double>::infinity()), dt);
}

void L4LinfAccumulator::add_sup(double sup_norm, double dt) {
  if (!(dt > 0.0)) throw DomainError("l4linf_update: dt must be positive");
  const double m2 = sup_norm * sup_norm;
  sum_ += m2 * m2 * dt;
}

double L4LinfAccumulator::value() const { return std::sqrt(std::sqrt(sum_)); }

GnTerms gn_check(const WaveField& f, double beta) {
  if (!(beta >= 1.0)) throw DomainError("gn_check: beta must be >= 1, got " + std::to_string(beta));
  const double lp = lp_norm(f, beta + 1.0);
  const double l2 = lp_norm(f, 2.0);
  const double grad = gradient_norm(f);
  return {std::pow(lp, beta + 1.0),
          std::pow(grad, 0.5 * (beta - 1.0)) * std::pow(l2, 0.5 * (beta + 3.0))};
}

double critical_threshold() {
  return std::pow(2.0 / 3.0, 0.25) * std::sqrt(0.5 * std::numbers::pi);
}

double boundary_mass_fraction(const WaveField& psi, double margin) {
  const double cut = (1.0 - margin) * psi.grid.half_length();
  double outside = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double m = std::norm(psi.values[j]);
    total += m;
    if (std::abs(psi.grid.position(j)) > cut) outside += m;
  }
  return total > 0.0 ? outside / total : 0.0;
}

DiagnosticsRecord evaluate_diagnostics(const WaveField& psi, const NonlinearModel& model, double t,
                                       const L4LinfAccumulator& accum) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = lp_norm(psi, 2.0);
  r.energy = energy(psi, model);
  r.momentum = momentum(psi);
  r.h1 = h1_norm(psi);
  r.sup_norm = lp_norm(psi, std::numeric_limits<double>::infinity());
  r.theta = oscillation_speed(psi, model);
  r.l4linf_accum = accum.value();
  return r;
}

}  // namespace fsps
