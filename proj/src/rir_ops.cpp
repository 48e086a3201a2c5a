#include "rir_ops.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"
#include "fft.hpp"

namespace rirlab {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kFull:
      return "full";
    case Variant::kDirect:
      return "direct";
    case Variant::kNoLate:
      return "nolate";
    case Variant::kNoEarly:
      return "noearly";
  }
  return "full";
}

Variant variant_from_name(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  fail(ErrorCode::kInvalidArgument, "unknown RIR variant '" + std::string(name) + "'");
}

const Rir& RirVariantSet::get(Variant v) const {
  switch (v) {
    case Variant::kDirect:
      return direct_only;
    case Variant::kNoLate:
      return no_late;
    case Variant::kNoEarly:
      return no_early;
    case Variant::kFull:
      break;
  }
  return full;
}

double fade_out(double t, double boundary, double fade) {
  if (t <= boundary) return 1.0;
  if (t >= boundary + fade) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (t - boundary) / fade));
}

double fade_in(double t, double boundary, double fade) {
  if (t >= boundary) return 1.0;
  if (t <= boundary - fade) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (boundary - t) / fade));
}

RirVariantSet decompose(const Rir& rir, double t_mix, double guard, double fade) {
  if (rir.samples.empty()) fail(ErrorCode::kEmptyRir, "cannot decompose an empty RIR");
  if (!(guard > 0.0) || !(fade > 0.0)) {
    fail(ErrorCode::kBoundaryOrderViolation, "guard and fade must be positive");
  }
  const double t_d = rir.tau_d + guard;
  if (!(t_mix > t_d + 2.0 * fade)) {
    fail(ErrorCode::kBoundaryOrderViolation,
         "t_mix must exceed tau_d + guard + 2 * fade");
  }

  RirVariantSet out;
  out.boundaries = {rir.tau_d, t_d, t_mix, guard, fade};
  out.full = rir;
  out.direct_only = rir;
  out.no_late = rir;
  out.no_early = rir;

  const double fs = rir.sample_rate;
  for (std::size_t i = 0; i < rir.samples.size(); ++i) {
    const double t = static_cast<double>(i) / fs;
    const double h = rir.samples[i];
    const double direct = fade_out(t, t_d, fade);
    const double early_late = fade_out(t, t_mix, fade);
    const double late = fade_in(t, t_mix, fade);
    out.direct_only.samples[i] = h * direct;
    out.no_late.samples[i] = h * early_late;
    out.no_early.samples[i] = h * (direct + late);
  }
  return out;
}

std::vector<double> convolve(std::span<const double> signal, std::span<const double> kernel) {
  if (signal.empty() || kernel.empty()) {
    fail(ErrorCode::kInvalidArgument, "convolution inputs must be non-empty");
  }
  const std::size_t out_len = signal.size() + kernel.size() - 1;
  const std::size_t shorter = std::min(signal.size(), kernel.size());
  if (shorter <= 64 || signal.size() * kernel.size() <= (1u << 16)) {
    std::vector<double> y(out_len, 0.0);
    for (std::size_t i = 0; i < signal.size(); ++i) {
      const double s = signal[i];
      if (s == 0.0) continue;
      for (std::size_t j = 0; j < kernel.size(); ++j) y[i + j] += s * kernel[j];
    }
    return y;
  }
  SpectralConvolver conv(signal.size(), kernel.size());
  const auto a = conv.spectrum(signal);
  const auto b = conv.spectrum(kernel);
  return conv.convolve(a, b, out_len);
}

std::vector<double> convolve(std::span<const double> signal, double signal_rate,
                             const Rir& rir) {
  if (signal_rate != rir.sample_rate) {
    fail(ErrorCode::kSampleRateMismatch, "signal and RIR sample rates differ");
  }
  return convolve(signal, std::span<const double>(rir.samples));
}

MixingTime detect_mixing_time(const Rir& rir, double guard, double fade, double threshold) {
  const double earliest = rir.tau_d + guard + 2.0 * fade + 1.0 / rir.sample_rate;
  return mixing_time(echo_density(rir), threshold, earliest);
}

}  // namespace rirlab
