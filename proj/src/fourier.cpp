#include "fsps/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "fsps/error.hpp"

namespace fsps {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// The FFTW planner is not re-entrant; plans live for the whole process.
std::pair<fftw_plan, fftw_plan> plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<Complex> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags),
               fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags)};
    if (p.forward == nullptr || p.backward == nullptr) {
      throw Error("FFT planner failed for length " + std::to_string(n));
    }
    it = cache.emplace(n, p).first;
  }
  return {it->second.forward, it->second.backward};
}

}  // namespace

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
  auto [f, b] = plans_for(n);
  forward_plan_ = f;
  backward_plan_ = b;
}

void FourierTransform::forward(std::span<Complex> data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void FourierTransform::backward(std::span<Complex> data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), buf, buf);
}

}  // namespace fsps
