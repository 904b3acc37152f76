#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace wnx2::detail {

// Real FFT of length n backed by FFTW. Owns its buffers; one instance per
// thread. Plan creation is serialized internally.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  double* time() { return time_; }
  std::complex<double>* freq() { return reinterpret_cast<std::complex<double>*>(freq_); }

  // time() -> freq(), unnormalized.
  void forward();
  // freq() -> time(), scaled by 1/n so inverse(forward(x)) == x.
  void inverse();

 private:
  std::size_t n_;
  double* time_ = nullptr;
  fftw_complex* freq_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace wnx2::detail
