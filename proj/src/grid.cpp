#include "fsps/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fsps/error.hpp"

namespace fsps {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid1D::Grid1D(double half_length, std::size_t n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ConfigError("grid half-length L must be positive and finite, got " +
                      std::to_string(half_length));
  }
  if (n_points < 8 || !is_power_of_two(n_points)) {
    throw ConfigError("grid size N must be a power of two >= 8, got " + std::to_string(n_points));
  }
  Data d;
  d.half_length = half_length;
  d.n = n_points;
  d.dx = 2.0 * half_length / static_cast<double>(n_points);
  d.positions.resize(n_points);
  d.frequencies.resize(n_points);
  d.fft_frequencies.resize(n_points);
  const auto half = static_cast<std::ptrdiff_t>(n_points / 2);
  const double dk = std::numbers::pi / half_length;
  for (std::size_t j = 0; j < n_points; ++j) {
    d.positions[j] = -half_length + static_cast<double>(j) * d.dx;
    const auto k_asc = static_cast<std::ptrdiff_t>(j) - half;
    d.frequencies[j] = dk * static_cast<double>(k_asc);
    const auto k_fft =
        static_cast<std::ptrdiff_t>(j) < half ? static_cast<std::ptrdiff_t>(j)
                                               : static_cast<std::ptrdiff_t>(j) - 2 * half;
    d.fft_frequencies[j] = dk * static_cast<double>(k_fft);
  }
  data_ = std::make_shared<const Data>(std::move(d));
}

Grid1D make_grid(double half_length, std::size_t n_points) {
  return Grid1D(half_length, n_points);
}

WaveField::WaveField(Grid1D g) : grid(std::move(g)), values(grid.size()) {}

WaveField::WaveField(Grid1D g, std::vector<Complex> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ConfigError("wave field has " + std::to_string(values.size()) +
                      " samples but the grid has " + std::to_string(grid.size()));
  }
}

WaveField WaveField::sample(const Grid1D& g, const std::function<Complex(double)>& fn) {
  WaveField f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f.values[j] = fn(g.position(j));
  return f;
}

std::size_t first_non_finite(std::span<const Complex> values) noexcept {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag())) return j;
  }
  return values.size();
}

}  // namespace fsps
