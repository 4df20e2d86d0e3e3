#pragma once

#include <span>
#include <vector>

#include "fsps/grid.hpp"

namespace fsps {

/// Order sigma of the fractional Poisson equation, strictly inside (0, 1).
class RieszOrder {
 public:
  /// Throws DomainError unless 0 < sigma < 1.
  explicit RieszOrder(double sigma);
  double value() const noexcept { return sigma_; }

  friend bool operator==(RieszOrder, RieszOrder) = default;

 private:
  double sigma_;
};

enum class PoissonBackend { spectral, quadrature };

/// Real potential samples on a grid.
struct Potential {
  Grid1D grid;
  std::vector<double> values;
};

struct RieszConstants {
  /// sqrt(pi) 2^(1-sigma) Gamma((1-sigma)/2) / Gamma(sigma/2): the same constant in the
  /// symmetric transform convention, equal to 2 pi kernel_c.
  double fourier_c;
  /// Gamma((1-sigma)/2) / (2^sigma sqrt(pi) Gamma(sigma/2)): the kernel constant for
  /// which c |x|^-(1-sigma) * d has Fourier multiplier |xi|^-sigma.
  double kernel_c;
};

RieszConstants riesz_constants(RieszOrder sigma);

enum class FractionalPower { positive, negative };

struct FractionalResult {
  WaveField field;
  /// Set when the negative power discarded a non-negligible zero mode (mean-free gauge).
  bool zero_mode_dropped = false;
};

/// (-Delta)^(+-sigma/2) as the multiplier |xi|^(+-sigma); the negative power zeroes xi = 0.
FractionalResult fractional_laplacian(const WaveField& f, RieszOrder sigma, FractionalPower power);

/// A0 = (-Delta)^(-sigma/2) density on the periodic grid, mean-free.
/// Throws InputError when the imaginary part exceeds 1e-8 of the density's L2 norm.
Potential solve_poisson_spectral(const WaveField& density, RieszOrder sigma);
Potential solve_poisson_spectral(const Grid1D& grid, std::span<const double> density,
                                 RieszOrder sigma);

struct QuadraturePotential {
  Potential raw;
  Potential mean_free;
};

/// Free-space convolution kernel_c |x|^-(1-sigma) * density with exact per-cell
/// kernel integrals and zero padding to 2N.
QuadraturePotential solve_poisson_quadrature(const WaveField& density, RieszOrder sigma);
QuadraturePotential solve_poisson_quadrature(const Grid1D& grid, std::span<const double> density,
                                             RieszOrder sigma);

/// Integral of |y|^(s-1) over [a, b], s > 0.
double power_kernel_cell_integral(double a, double b, double s);

/// ||(|y|^-beta) * f||_p / ||f||_r with the free-space quadrature convolution.
/// Requires 0 < beta < 1, 1 < r < p < inf and 1/p = beta + 1/r - 1 (to 1e-12).
double hls_ratio(const WaveField& f, double beta, double p, double r);

/// Reusable Poisson solver with cached kernels and scratch space.
///
/// The spectral backend yields the mean-free potential; the quadrature backend
/// yields the raw free-space potential. Not safe for concurrent use of one instance.
class PoissonSolver {
 public:
  PoissonSolver(Grid1D grid, RieszOrder sigma, PoissonBackend backend);

  void solve(std::span<const double> density, std::span<double> potential);

  PoissonBackend backend() const noexcept { return backend_; }
  const Grid1D& grid() const noexcept { return grid_; }

 private:
  Grid1D grid_;
  RieszOrder sigma_;
  PoissonBackend backend_;
  std::vector<double> multiplier_;        // spectral: |xi|^-sigma / N, FFT order
  std::vector<Complex> kernel_spectrum_;  // quadrature: DFT of padded weights / (2N)
  std::vector<Complex> scratch_;
};

}  // namespace fsps
