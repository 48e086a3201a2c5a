#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rirlab {

// Smallest n >= min_size of the form 2^a 3^b 5^c.
std::size_t fft_friendly_size(std::size_t min_size);

// Real-input FFT of a fixed size backed by FFTW. Plans are created under a
// global lock; execution is thread-safe on distinct instances.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return size_; }
  std::size_t bins() const { return size_ / 2 + 1; }

  // Zero-pads (or truncates) input to size().
  std::vector<std::complex<double>> forward(std::span<const double> input);
  // Unnormalised inverse; divide by size() for the round trip.
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum);

 private:
  struct Plans;
  std::size_t size_;
  std::unique_ptr<Plans> plans_;
};

// Linear convolution of one or more signals with one or more kernels that
// share a transform size.
class SpectralConvolver {
 public:
  SpectralConvolver(std::size_t max_signal_len, std::size_t max_kernel_len);

  std::vector<std::complex<double>> spectrum(std::span<const double> x);
  // Full linear convolution of the two transformed inputs with output length
  // out_len.
  std::vector<double> convolve(std::span<const std::complex<double>> a,
                               std::span<const std::complex<double>> b,
                               std::size_t out_len);

 private:
  RealFft fft_;
};

}  // namespace rirlab
