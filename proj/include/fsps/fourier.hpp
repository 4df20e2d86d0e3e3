#pragma once

#include <cstddef>
#include <span>

#include "fsps/grid.hpp"

namespace fsps {

/// Unnormalized in-place complex DFT of a fixed length, in native FFT order.
///
/// Plans are created once per length and shared process-wide; executing a
/// plan is thread-safe. Plans are built without SIMD-alignment assumptions so
/// identical inputs give bit-identical outputs regardless of buffer address.
class FourierTransform {
 public:
  explicit FourierTransform(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// data <- sum_j data_j exp(-2 pi i j k / n)
  void forward(std::span<Complex> data) const;
  /// data <- sum_k data_k exp(+2 pi i j k / n)   (no 1/n factor)
  void backward(std::span<Complex> data) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace fsps
