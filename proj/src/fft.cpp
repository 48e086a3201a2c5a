#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "error.hpp"

namespace rirlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::size_t fft_friendly_size(std::size_t min_size) {
  std::size_t n = std::max<std::size_t>(min_size, 1);
  for (;; ++n) {
    std::size_t m = n;
    for (std::size_t p : {2, 3, 5}) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) return n;
  }
}

struct RealFft::Plans {
  double* real = nullptr;
  fftw_complex* freq = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

RealFft::RealFft(std::size_t size) : size_(size), plans_(std::make_unique<Plans>()) {
  if (size_ == 0) fail(ErrorCode::kInvalidArgument, "FFT size must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->real = fftw_alloc_real(size_);
  plans_->freq = fftw_alloc_complex(bins());
  const int n = static_cast<int>(size_);
  plans_->fwd = fftw_plan_dft_r2c_1d(n, plans_->real, plans_->freq, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_dft_c2r_1d(n, plans_->freq, plans_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
  fftw_free(plans_->real);
  fftw_free(plans_->freq);
}

std::vector<std::complex<double>> RealFft::forward(std::span<const double> input) {
  const std::size_t n = std::min(input.size(), size_);
  std::copy_n(input.begin(), n, plans_->real);
  std::fill(plans_->real + n, plans_->real + size_, 0.0);
  fftw_execute(plans_->fwd);
  std::vector<std::complex<double>> out(bins());
  std::memcpy(static_cast<void*>(out.data()), plans_->freq, bins() * sizeof(fftw_complex));
  return out;
}

std::vector<double> RealFft::inverse(std::span<const std::complex<double>> spectrum) {
  if (spectrum.size() != bins()) {
    fail(ErrorCode::kInvalidArgument, "spectrum size does not match FFT size");
  }
  // c2r destroys its input, so always copy into the plan buffer.
  std::memcpy(plans_->freq, spectrum.data(), bins() * sizeof(fftw_complex));
  fftw_execute(plans_->inv);
  return std::vector<double>(plans_->real, plans_->real + size_);
}

SpectralConvolver::SpectralConvolver(std::size_t max_signal_len, std::size_t max_kernel_len)
    : fft_(fft_friendly_size(max_signal_len + max_kernel_len - 1)) {}

std::vector<std::complex<double>> SpectralConvolver::spectrum(std::span<const double> x) {
  return fft_.forward(x);
}

std::vector<double> SpectralConvolver::convolve(std::span<const std::complex<double>> a,
                                                std::span<const std::complex<double>> b,
                                                std::size_t out_len) {
  std::vector<std::complex<double>> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  auto y = fft_.inverse(prod);
  const double scale = 1.0 / static_cast<double>(fft_.size());
  y.resize(std::min(out_len, y.size()));
  for (double& v : y) v *= scale;
  y.resize(out_len, 0.0);
  return y;
}

}  // namespace rirlab
