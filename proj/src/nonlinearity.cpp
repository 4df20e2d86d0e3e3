#include "fsps/nonlinearity.hpp"

#include <cmath>
#include <string>

#include "fsps/error.hpp"

namespace fsps {

namespace {

std::vector<double> density_of(const WaveField& psi) {
  std::vector<double> d(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) d[j] = std::norm(psi.values[j]);
  return d;
}

}  // namespace

Potential interaction_potential(const WaveField& psi, const NonlinearModel& model) {
  Potential a0{psi.grid, std::vector<double>(psi.size(), 0.0)};
  if (model.nonlocal_enabled) {
    const auto bad = first_non_finite(psi.values);
    if (bad != psi.size()) throw NumericError("interaction_potential: non-finite field", bad);
    PoissonSolver(psi.grid, model.sigma, model.backend).solve(density_of(psi), a0.values);
  }
  if (model.gauge_offset != 0.0) {
    for (auto& v : a0.values) v += model.gauge_offset;
  }
  return a0;
}

WaveField nonlocal_term(const WaveField& psi, RieszOrder sigma, PoissonBackend backend) {
  NonlinearModel model;
  model.sigma = sigma;
  model.backend = backend;
  const auto a0 = interaction_potential(psi, model);
  WaveField out(psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) out.values[j] = a0.values[j] * psi.values[j];
  return out;
}

double local_coefficient(Complex z, double gamma) {
  const double m = std::abs(z);
  if (m == 0.0) return 0.0;
  if (gamma == 3.0) return m * m;
  if (gamma == 5.0) return (m * m) * (m * m);
  return std::pow(m, gamma - 1.0);
}

WaveField local_term(const WaveField& psi, double gamma, int alpha) {
  if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1, got " + std::to_string(gamma));
  WaveField out(psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    out.values[j] = static_cast<double>(alpha) * local_coefficient(psi.values[j], gamma) *
                    psi.values[j];
  }
  return out;
}

WaveField nonlinearity(const WaveField& psi, const NonlinearModel& model) {
  const auto a0 = interaction_potential(psi, model);
  WaveField out(psi.grid);
  const double alpha = model.local_enabled ? static_cast<double>(model.alpha) : 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double v = a0.values[j] + alpha * local_coefficient(psi.values[j], model.gamma);
    out.values[j] = v * psi.values[j];
  }
  return out;
}

}  // namespace fsps
