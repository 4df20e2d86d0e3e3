#include "fsps/spectral.hpp"

#include <cmath>
#include <limits>

#include "fsps/error.hpp"
#include "fsps/fourier.hpp"

namespace fsps {

namespace {

void require_finite(const WaveField& f, const char* what) {
  const auto bad = first_non_finite(f.values);
  if (bad != f.size()) throw NumericError(std::string(what) + ": non-finite input", bad);
}

// Fills `out` with the FFT-ordered raw DFT of f.
std::vector<Complex> raw_dft(const WaveField& f) {
  std::vector<Complex> buf = f.values;
  FourierTransform(f.size()).forward(buf);
  return buf;
}

// Sum over modes of w(xi) |c_k|^2 with unitary coefficients c_k.
double weighted_spectral_energy(const WaveField& f, const std::function<double(double)>& w) {
  const auto raw = raw_dft(f);
  const auto xi = f.grid.fft_frequencies();
  double sum = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) sum += w(xi[k]) * std::norm(raw[k]);
  return sum * f.grid.dx() / static_cast<double>(f.size());
}

}  // namespace

Spectrum forward_transform(const WaveField& f) {
  require_finite(f, "forward_transform");
  const auto raw = raw_dft(f);
  const std::size_t n = f.size();
  const double scale = std::sqrt(f.grid.dx() / static_cast<double>(n));
  Spectrum s{f.grid, std::vector<Complex>(n)};
  // x_0 = -L contributes exp(i xi_k L) = (-1)^k.
  for (std::size_t slot = 0; slot < n; ++slot) {
    const double sign = (slot % 2 == 0) ? 1.0 : -1.0;
    s.coeffs[f.grid.ascending_index(slot)] = sign * scale * raw[slot];
  }
  return s;
}

WaveField inverse_transform(const Spectrum& s) {
  const std::size_t n = s.grid.size();
  if (s.coeffs.size() != n) throw ConfigError("spectrum length does not match its grid");
  const auto bad = first_non_finite(s.coeffs);
  if (bad != n) throw NumericError("inverse_transform: non-finite coefficient", bad);
  std::vector<Complex> buf(n);
  for (std::size_t slot = 0; slot < n; ++slot) {
    const double sign = (slot % 2 == 0) ? 1.0 : -1.0;
    buf[slot] = sign * s.coeffs[s.grid.ascending_index(slot)];
  }
  FourierTransform(n).backward(buf);
  const double scale = 1.0 / std::sqrt(s.grid.length());
  for (auto& v : buf) v *= scale;
  return WaveField(s.grid, std::move(buf));
}

WaveField apply_multiplier(const WaveField& f, const std::function<Complex(double)>& m) {
  require_finite(f, "apply_multiplier");
  const std::size_t n = f.size();
  FourierTransform fft(n);
  std::vector<Complex> buf = f.values;
  fft.forward(buf);
  const auto xi = f.grid.fft_frequencies();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) buf[k] *= m(xi[k]) * inv_n;
  fft.backward(buf);
  return WaveField(f.grid, std::move(buf));
}

WaveField free_propagate(const WaveField& f, double t) {
  if (t == 0.0) {
    require_finite(f, "free_propagate");
    return f;
  }
  return apply_multiplier(f, [t](double xi) { return std::polar(1.0, -0.5 * xi * xi * t); });
}

WaveField gradient(const WaveField& f) {
  const double nyquist = f.grid.fft_frequencies()[f.size() / 2];
  return apply_multiplier(f, [nyquist](double xi) {
    return xi == nyquist ? Complex{} : Complex{0.0, xi};
  });
}

double lp_norm(const WaveField& f, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw ConfigError("lp_norm exponent must satisfy p >= 1, got " + std::to_string(p));
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& v : f.values) sum += std::norm(v);
    return std::sqrt(sum * f.grid.dx());
  }
  for (const auto& v : f.values) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.grid.dx(), 1.0 / p);
}

double gradient_norm(const WaveField& f) {
  require_finite(f, "gradient_norm");
  return std::sqrt(weighted_spectral_energy(f, [](double xi) { return xi * xi; }));
}

double h1_norm(const WaveField& f) {
  require_finite(f, "h1_norm");
  return std::sqrt(weighted_spectral_energy(f, [](double xi) { return 1.0 + xi * xi; }));
}

double relative_l2_error(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid)) throw ConfigError("relative_l2_error: fields live on different grids");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff += std::norm(a.values[j] - b.values[j]);
    ref += std::norm(b.values[j]);
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff * a.grid.dx());
}

}  // namespace fsps
