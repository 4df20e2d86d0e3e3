#pragma once

#include "fsps/grid.hpp"
#include "fsps/nonlinearity.hpp"

namespace fsps {

/// Observables of one time sample.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;  // ||Psi||_2
  double energy = 0.0;
  double momentum = 0.0;
  double h1 = 0.0;
  double sup_norm = 0.0;
  double theta = 0.0;
  double l4linf_accum = 0.0;  // (int_0^t ||Psi||_inf^4 ds)^(1/4)
};

/// Energy split into its three terms; total() is their sum.
///
/// kinetic = 1/4 ||grad Psi||^2, interaction = 1/4 int A0 |Psi|^2,
/// local = alpha/(gamma+1) int |Psi|^(gamma+1). The interaction term uses the
/// model's gauge (see NonlinearModel), so drift checks compare like with like.
struct EnergyParts {
  double kinetic = 0.0;
  double interaction = 0.0;
  double local = 0.0;

  double total() const noexcept { return kinetic + interaction + local; }
};

EnergyParts energy_parts(const WaveField& psi, const NonlinearModel& model);
double energy(const WaveField& psi, const NonlinearModel& model);

/// Im int grad(Psi) conj(Psi) dx.
double momentum(const WaveField& psi);

/// theta = int Im(conj(Psi) dPsi/dt) dx with dPsi/dt = i((1/2) Psi'' - A0 Psi - alpha |Psi|^(gamma-1) Psi).
double oscillation_speed(const WaveField& psi, const NonlinearModel& model);

/// Left-endpoint accumulator of int ||Psi(s)||_inf^4 ds.
class L4LinfAccumulator {
 public:
  void add(const WaveField& psi, double dt);
  void add_sup(double sup_norm, double dt);

  /// The accumulated integral raised to the power 1/4.
  double value() const;
  double fourth_power() const noexcept { return sum_; }

 private:
  double sum_ = 0.0;
};

struct GnTerms {
  double lhs;       // ||f||_(beta+1)^(beta+1)
  double rhs_core;  // ||grad f||_2^((beta-1)/2) ||f||_2^((beta+3)/2)

  double ratio() const noexcept { return lhs / rhs_core; }
};

/// Constant-free Gagliardo-Nirenberg terms. Requires beta >= 1.
GnTerms gn_check(const WaveField& f, double beta);

/// delta = (2/3)^(1/4) (pi/2)^(1/2), the mass below which focusing quintic data stays H1-bounded.
double critical_threshold();

/// Mass fraction outside |x| <= (1 - margin) L; large values flag periodic wrap-around.
double boundary_mass_fraction(const WaveField& psi, double margin = 0.1);

DiagnosticsRecord evaluate_diagnostics(const WaveField& psi, const NonlinearModel& model, double t,
                                       const L4LinfAccumulator& accum);

}  // namespace fsps
