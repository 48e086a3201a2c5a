#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "fft.hpp"

namespace rirlab {

namespace {

std::optional<std::size_t> first_above(std::span<const double> x, double rel) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return std::nullopt;
  const double thr = rel * peak;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > thr) return i;
  }
  return std::nullopt;
}

}  // namespace

DistanceEstimate onset_delay_estimate(std::span<const double> signal, double sample_rate,
                                      double speed_of_sound, double rel_threshold) {
  if (signal.empty()) fail(ErrorCode::kInvalidArgument, "onset estimate of an empty signal");
  const auto onset = first_above(signal, rel_threshold);
  if (!onset) fail(ErrorCode::kSilentSignal, "signal is silent");
  const double samples = *onset == 0 ? 0.5 : static_cast<double>(*onset);
  return {samples / sample_rate * speed_of_sound, kOnsetMethod, std::nullopt};
}

double median(std::vector<double> v) {
  if (v.empty()) fail(ErrorCode::kInvalidArgument, "median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

PriorConstantBaseline::PriorConstantBaseline(std::span<const double> train_distances)
    : value_(median(std::vector<double>(train_distances.begin(), train_distances.end()))) {}

FeatureTable export_features(std::span<const double> signal, double sample_rate,
                             std::size_t frame_len, std::size_t hop) {
  if (signal.empty()) fail(ErrorCode::kInvalidArgument, "feature export of an empty signal");
  if (frame_len < 2 || hop == 0) fail(ErrorCode::kInvalidArgument, "bad STFT geometry");

  FeatureTable t;
  t.frame_len = frame_len;
  t.hop = hop;
  t.sample_rate = sample_rate;

  std::vector<double> window(frame_len);
  for (std::size_t i = 0; i < frame_len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(frame_len));
  }
  RealFft fft(frame_len);
  const std::size_t bins = fft.bins();
  const double bin_hz = sample_rate / static_cast<double>(frame_len);
  const std::size_t rows = (signal.size() + hop - 1) / hop;

  std::vector<double> buf(frame_len);
  std::vector<std::complex<double>> prev;
  double total_weighted = 0.0, total_mag = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t start = r * hop;
    double e = 0.0;
    for (std::size_t i = 0; i < frame_len; ++i) {
      const double v = start + i < signal.size() ? signal[start + i] : 0.0;
      e += v * v;
      buf[i] = v * window[i];
    }
    const auto spec = fft.forward(buf);
    std::vector<double> mag(bins);
    double sum = 0.0, sum2 = 0.0, weighted = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      mag[k] = std::abs(spec[k]);
      sum += mag[k];
      sum2 += mag[k] * mag[k];
      weighted += mag[k] * static_cast<double>(k) * bin_hz;
    }
    FeatureFrame f;
    f.time = static_cast<double>(start) / sample_rate;
    f.rms = std::sqrt(e / static_cast<double>(frame_len));
    f.magnitude_mean = sum / static_cast<double>(bins);
    f.magnitude_std = std::sqrt(std::max(0.0, sum2 / static_cast<double>(bins) -
                                                  f.magnitude_mean * f.magnitude_mean));
    f.spectral_centroid = sum > 0.0 ? weighted / sum : 0.0;
    if (!prev.empty() && sum > 0.0) {
      // Deviation of each bin's phase advance from the hop-implied advance.
      std::complex<double> acc = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        if (std::abs(spec[k]) == 0.0 || std::abs(prev[k]) == 0.0) continue;
        const double expected = 2.0 * std::numbers::pi * static_cast<double>(k * hop) /
                                static_cast<double>(frame_len);
        const double dev = std::arg(spec[k]) - std::arg(prev[k]) - expected;
        acc += mag[k] * std::polar(1.0, dev);
      }
      f.phase_coherence = std::abs(acc) / sum;
    }
    total_weighted += weighted;
    total_mag += sum;
    prev = spec;
    t.frames.push_back(f);
    t.magnitudes.push_back(std::move(mag));
  }

  double e = 0.0;
  for (double v : signal) e += v * v;
  t.rms = std::sqrt(e / static_cast<double>(signal.size()));
  t.spectral_centroid = total_mag > 0.0 ? total_weighted / total_mag : 0.0;
  if (const auto onset = first_above(signal, kDefaultOnsetThreshold)) {
    const auto split = std::min(signal.size(),
                                *onset + static_cast<std::size_t>(0.005 * sample_rate));
    double head = 0.0, rest = 0.0;
    for (std::size_t i = *onset; i < signal.size(); ++i) {
      (i < split ? head : rest) += signal[i] * signal[i];
    }
    if (head > 0.0 && rest > 0.0) t.drr_proxy_db = 10.0 * std::log10(head / rest);
  }
  return t;
}

std::string FeatureTable::to_csv() const {
  std::ostringstream os;
  os << "frame,time_s,rms,mag_mean,mag_std,centroid_hz,phase_coherence,"
        "signal_rms,drr_proxy_db,signal_centroid_hz";
  const std::size_t bins = magnitudes.empty() ? 0 : magnitudes.front().size();
  for (std::size_t k = 0; k < bins; ++k) os << ",mag_" << k;
  os << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.9g", v);
    os << buf;
  };
  for (std::size_t r = 0; r < frames.size(); ++r) {
    const auto& f = frames[r];
    os << r;
    put(f.time);
    put(f.rms);
    put(f.magnitude_mean);
    put(f.magnitude_std);
    put(f.spectral_centroid);
    put(f.phase_coherence);
    put(rms);
    put(drr_proxy_db);
    put(spectral_centroid);
    for (double m : magnitudes[r]) put(m);
    os << '\n';
  }
  return os.str();
}

}  // namespace rirlab
