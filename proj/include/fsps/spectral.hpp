#pragma once

#include <functional>

#include "fsps/grid.hpp"

namespace fsps {

/// Unitary transform: c_k = (1/sqrt(2L)) * sum_j f(x_j) exp(-i xi_k x_j) dx.
/// Throws NumericError at the first non-finite sample.
Spectrum forward_transform(const WaveField& f);

/// Inverse of forward_transform: f(x_j) = (1/sqrt(2L)) * sum_k c_k exp(i xi_k x_j).
WaveField inverse_transform(const Spectrum& s);

/// Applies the Fourier multiplier m(xi) to f. m is evaluated in FFT order.
WaveField apply_multiplier(const WaveField& f, const std::function<Complex(double)>& m);

/// Free Schrodinger group S(t): multiplier exp(-i xi^2 t / 2). Any real t.
WaveField free_propagate(const WaveField& f, double t);

/// Spectral derivative (multiplier i xi, zero at the Nyquist mode).
WaveField gradient(const WaveField& f);

/// Rectangle-rule L^p norm; pass infinity for the max modulus. p < 1 throws ConfigError.
double lp_norm(const WaveField& f, double p);

/// ||grad f||_2 evaluated from the spectrum.
double gradient_norm(const WaveField& f);

/// sqrt(||f||_2^2 + ||grad f||_2^2).
double h1_norm(const WaveField& f);

/// ||a - b||_2 / ||b||_2 (absolute difference if b vanishes).
double relative_l2_error(const WaveField& a, const WaveField& b);

}  // namespace fsps
