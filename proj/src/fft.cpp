#include "fft.h"

#include <mutex>

namespace wnx2::detail {

namespace {
// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  time_ = fftw_alloc_real(n_);
  freq_ = fftw_alloc_complex(n_ / 2 + 1);
  const int len = static_cast<int>(n_);
  forward_ = fftw_plan_dft_r2c_1d(len, time_, freq_, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(len, freq_, time_, FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(inverse_);
  fftw_free(time_);
  fftw_free(freq_);
}

void RealFft::forward() { fftw_execute(forward_); }

void RealFft::inverse() {
  fftw_execute(inverse_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) time_[i] *= scale;
}

}  // namespace wnx2::detail
