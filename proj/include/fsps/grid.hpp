#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fsps {

using Complex = std::complex<double>;

/// Uniform periodic grid on [-L, L) with N points and its dual frequency grid.
///
/// Frequencies are xi_k = pi k / L for k = -N/2, ..., N/2 - 1, stored in
/// ascending order; `fft_frequencies()` holds the same values in the native
/// FFT order (k = 0, 1, ..., N/2 - 1, -N/2, ..., -1). Copies share storage.
class Grid1D {
 public:
  /// Throws ConfigError unless half_length > 0 and n_points is a power of two >= 8.
  Grid1D(double half_length, std::size_t n_points);

  double half_length() const noexcept { return data_->half_length; }
  double length() const noexcept { return 2.0 * data_->half_length; }
  std::size_t size() const noexcept { return data_->n; }
  double dx() const noexcept { return data_->dx; }

  double position(std::size_t j) const noexcept { return data_->positions[j]; }
  std::span<const double> positions() const noexcept { return data_->positions; }
  std::span<const double> frequencies() const noexcept { return data_->frequencies; }
  std::span<const double> fft_frequencies() const noexcept { return data_->fft_frequencies; }

  /// Index into `frequencies()` of the FFT-ordered slot j.
  std::size_t ascending_index(std::size_t fft_slot) const noexcept {
    return (fft_slot + data_->n / 2) % data_->n;
  }

  friend bool operator==(const Grid1D& a, const Grid1D& b) noexcept {
    return a.data_ == b.data_ ||
           (a.data_->n == b.data_->n && a.data_->half_length == b.data_->half_length);
  }

 private:
  struct Data {
    double half_length;
    std::size_t n;
    double dx;
    std::vector<double> positions;
    std::vector<double> frequencies;
    std::vector<double> fft_frequencies;
  };
  std::shared_ptr<const Data> data_;
};

Grid1D make_grid(double half_length, std::size_t n_points);

/// Complex samples of a wave function on a grid.
struct WaveField {
  Grid1D grid;
  std::vector<Complex> values;
  bool diverged = false;

  explicit WaveField(Grid1D g);
  WaveField(Grid1D g, std::vector<Complex> v);

  static WaveField sample(const Grid1D& g, const std::function<Complex(double)>& fn);

  std::size_t size() const noexcept { return values.size(); }
  Complex& operator[](std::size_t j) { return values[j]; }
  const Complex& operator[](std::size_t j) const { return values[j]; }
};

/// Unitary Fourier coefficients, ordered to match `grid.frequencies()`.
struct Spectrum {
  Grid1D grid;
  std::vector<Complex> coeffs;
};

/// Index of the first non-finite sample, or size() if all are finite.
std::size_t first_non_finite(std::span<const Complex> values) noexcept;

}  // namespace fsps
