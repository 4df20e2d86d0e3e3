#pragma once

#include <span>

#include "fsps/grid.hpp"
#include "fsps/riesz.hpp"

namespace fsps {

/// Right-hand side of i dPsi/dt + (1/2) Psi'' = A0 Psi + alpha |Psi|^(gamma-1) Psi.
///
/// A0 is taken in the backend's natural gauge: mean-free for the spectral solver,
/// the raw free-space potential for the quadrature solver. `gauge_offset` adds a
/// constant to A0; the enable flags switch terms off for linear reference runs.
struct NonlinearModel {
  RieszOrder sigma{1.0 / 3.0};
  double gamma = 3.0;
  int alpha = 1;
  PoissonBackend backend = PoissonBackend::spectral;
  bool nonlocal_enabled = true;
  bool local_enabled = true;
  double gauge_offset = 0.0;
};

/// A0 for the field in the model's gauge (zero when the nonlocal term is disabled).
Potential interaction_potential(const WaveField& psi, const NonlinearModel& model);

/// A0 Psi with A0 from the chosen backend (spectral: mean-free, quadrature: raw).
WaveField nonlocal_term(const WaveField& psi, RieszOrder sigma, PoissonBackend backend);

/// alpha |Psi|^(gamma-1) Psi, mapping zero samples to zero. Requires gamma > 1.
WaveField local_term(const WaveField& psi, double gamma, int alpha);

/// |z|^(gamma-1), defined as 0 at z = 0.
double local_coefficient(Complex z, double gamma);

/// Full nonlinearity (A0 + offset) Psi + alpha |Psi|^(gamma-1) Psi honoring the enable flags.
WaveField nonlinearity(const WaveField& psi, const NonlinearModel& model);

}  // namespace fsps
