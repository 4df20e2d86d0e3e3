#include "fsps/riesz.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fsps/error.hpp"
#include "fsps/fourier.hpp"
#include "fsps/spectral.hpp"

namespace fsps {

namespace {

std::vector<double> real_density(const WaveField& density) {
  double re2 = 0.0;
  double im2 = 0.0;
  std::vector<double> out(density.size());
  for (std::size_t j = 0; j < density.size(); ++j) {
    re2 += std::norm(density.values[j].real());
    im2 += std::norm(density.values[j].imag());
    out[j] = density.values[j].real();
  }
  if (im2 > 1e-16 * (re2 + im2)) {
    throw InputError("density must be real: imaginary part is " +
                     std::to_string(std::sqrt(im2 / (re2 + im2))) + " of its L2 norm");
  }
  return out;
}

void check_length(const Grid1D& grid, std::size_t n) {
  if (grid.size() != n) {
    throw ConfigError("density has " + std::to_string(n) + " samples, grid has " +
                      std::to_string(grid.size()));
  }
}

// Spectrum (divided by the padded length) of the per-cell weights of
// |y|^(s-1) on offsets -N..N-1, wrapped onto a 2N circular buffer.
std::vector<Complex> padded_kernel_spectrum(const Grid1D& grid, double s, double constant) {
  const std::size_t n = grid.size();
  const std::size_t m = 2 * n;
  const double dx = grid.dx();
  std::vector<Complex> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double offset =
        i < n ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(m);
    w[i] = constant * power_kernel_cell_integral((offset - 0.5) * dx, (offset + 0.5) * dx, s);
  }
  FourierTransform(m).forward(w);
  for (auto& v : w) v /= static_cast<double>(m);
  return w;
}

// out_i = sum_j w_(i-j) in_j for i, j in [0, N); scratch has length 2N.
void free_space_convolve(std::span<const Complex> kernel_spectrum, std::span<Complex> scratch,
                         std::size_t n) {
  FourierTransform fft(2 * n);
  std::fill(scratch.begin() + static_cast<std::ptrdiff_t>(n), scratch.end(), Complex{});
  fft.forward(scratch);
  for (std::size_t k = 0; k < scratch.size(); ++k) scratch[k] *= kernel_spectrum[k];
  fft.backward(scratch);
}

}  // namespace

RieszOrder::RieszOrder(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw DomainError("sigma must lie strictly inside (0,1), got " + std::to_string(sigma));
  }
}

RieszConstants riesz_constants(RieszOrder order) {
  const double s = order.value();
  const double ratio = std::tgamma(0.5 * (1.0 - s)) / std::tgamma(0.5 * s);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  return {sqrt_pi * std::exp2(1.0 - s) * ratio, ratio / (std::exp2(s) * sqrt_pi)};
}

double power_kernel_cell_integral(double a, double b, double s) {
  auto antiderivative = [s](double y) {
    return y == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(y), s), y);
  };
  return (antiderivative(b) - antiderivative(a)) / s;
}

FractionalResult fractional_laplacian(const WaveField& f, RieszOrder sigma,
                                      FractionalPower power) {
  const double s = power == FractionalPower::positive ? sigma.value() : -sigma.value();
  FractionalResult out{apply_multiplier(f,
                                        [s](double xi) {
                                          return xi == 0.0 ? 0.0 : std::pow(std::abs(xi), s);
                                        }),
                       false};
  if (power == FractionalPower::negative) {
    Complex mean{};
    double rms = 0.0;
    for (const auto& v : f.values) {
      mean += v;
      rms += std::norm(v);
    }
    const auto n = static_cast<double>(f.size());
    out.zero_mode_dropped = std::abs(mean / n) > 1e-12 * std::sqrt(rms / n);
  }
  return out;
}

Potential solve_poisson_spectral(const WaveField& density, RieszOrder sigma) {
  const auto d = real_density(density);
  return solve_poisson_spectral(density.grid, d, sigma);
}

Potential solve_poisson_spectral(const Grid1D& grid, std::span<const double> density,
                                 RieszOrder sigma) {
  check_length(grid, density.size());
  Potential p{grid, std::vector<double>(grid.size())};
  PoissonSolver(grid, sigma, PoissonBackend::spectral).solve(density, p.values);
  return p;
}

QuadraturePotential solve_poisson_quadrature(const WaveField& density, RieszOrder sigma) {
  const auto d = real_density(density);
  return solve_poisson_quadrature(density.grid, d, sigma);
}

QuadraturePotential solve_poisson_quadrature(const Grid1D& grid, std::span<const double> density,
                                             RieszOrder sigma) {
  check_length(grid, density.size());
  QuadraturePotential out{{grid, std::vector<double>(grid.size())}, {grid, {}}};
  PoissonSolver(grid, sigma, PoissonBackend::quadrature).solve(density, out.raw.values);
  const double mean = std::accumulate(out.raw.values.begin(), out.raw.values.end(), 0.0) /
                      static_cast<double>(grid.size());
  out.mean_free.values = out.raw.values;
  for (auto& v : out.mean_free.values) v -= mean;
  return out;
}

double hls_ratio(const WaveField& f, double beta, double p, double r) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ConfigError("hls_ratio: beta must lie in (0,1), got " + std::to_string(beta));
  }
  if (!(r > 1.0 && r < p && std::isfinite(p))) {
    throw ConfigError("hls_ratio: exponents must satisfy 1 < r < p < inf");
  }
  if (std::abs(1.0 / p - (beta + 1.0 / r - 1.0)) > 1e-12) {
    throw ConfigError("hls_ratio: exponents violate 1/p = beta + 1/r - 1");
  }
  const std::size_t n = f.size();
  const auto kernel = padded_kernel_spectrum(f.grid, 1.0 - beta, 1.0);
  std::vector<Complex> scratch(2 * n);
  std::copy(f.values.begin(), f.values.end(), scratch.begin());
  free_space_convolve(kernel, scratch, n);
  scratch.resize(n);
  const double denom = lp_norm(f, r);
  if (denom == 0.0) throw InputError("hls_ratio: f must not vanish identically");
  return lp_norm(WaveField(f.grid, std::move(scratch)), p) / denom;
}

PoissonSolver::PoissonSolver(Grid1D grid, RieszOrder sigma, PoissonBackend backend)
    : grid_(std::move(grid)), sigma_(sigma), backend_(backend) {
  const std::size_t n = grid_.size();
  if (backend_ == PoissonBackend::spectral) {
    multiplier_.resize(n);
    const auto xi = grid_.fft_frequencies();
    for (std::size_t k = 0; k < n; ++k) {
      multiplier_[k] =
          xi[k] == 0.0 ? 0.0 : std::pow(std::abs(xi[k]), -sigma_.value()) / static_cast<double>(n);
    }
    scratch_.resize(n);
  } else {
    kernel_spectrum_ =
        padded_kernel_spectrum(grid_, sigma_.value(), riesz_constants(sigma_).kernel_c);
    scratch_.resize(2 * n);
  }
}

void PoissonSolver::solve(std::span<const double> density, std::span<double> potential) {
  const std::size_t n = grid_.size();
  check_length(grid_, density.size());
  check_length(grid_, potential.size());
  for (std::size_t j = 0; j < n; ++j) scratch_[j] = density[j];
  if (backend_ == PoissonBackend::spectral) {
    FourierTransform fft(n);
    fft.forward(scratch_);
    for (std::size_t k = 0; k < n; ++k) scratch_[k] *= multiplier_[k];
    fft.backward(scratch_);
  } else {
    free_space_convolve(kernel_spectrum_, scratch_, n);
  }
  for (std::size_t j = 0; j < n; ++j) potential[j] = scratch_[j].real();
}

}  // namespace fsps
