#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rirlab {

struct DistanceEstimate {
  double r_hat = 0.0;
  std::string method;
  std::optional<double> confidence;
};

inline constexpr const char* kOnsetMethod = "onset-delay";
inline constexpr const char* kPriorMedianMethod = "prior-median";

// -30 dB of peak.
inline const double kDefaultOnsetThreshold = 0.031622776601683794;

// r_hat = onset / fs * c, where onset is the first sample whose magnitude
// exceeds rel_threshold * max|x|. An onset at sample 0 is reported as half
// a sample so the estimate stays positive.
DistanceEstimate onset_delay_estimate(std::span<const double> signal, double sample_rate,
                                      double speed_of_sound = 343.0,
                                      double rel_threshold = kDefaultOnsetThreshold);

// Constant predictor at the median of the training distances.
class PriorConstantBaseline {
 public:
  explicit PriorConstantBaseline(std::span<const double> train_distances);

  double value() const { return value_; }
  DistanceEstimate predict() const { return {value_, kPriorMedianMethod, std::nullopt}; }

 private:
  double value_;
};

double median(std::vector<double> v);

// Per-frame spectral summary plus whole-signal scalars.
struct FeatureFrame {
  double time = 0.0;  // frame start, seconds
  double rms = 0.0;
  double magnitude_mean = 0.0;
  double magnitude_std = 0.0;
  double spectral_centroid = 0.0;  // Hz; 0 for a silent frame
  double phase_coherence = 0.0;    // |mean of unit phase-advance phasors|
};

struct FeatureTable {
  std::size_t frame_len = 512;
  std::size_t hop = 256;
  double sample_rate = 16000.0;
  std::vector<FeatureFrame> frames;
  std::vector<std::vector<double>> magnitudes;  // [frame][bin]
  double rms = 0.0;
  double drr_proxy_db = 0.0;  // onset window energy vs the rest; 0 when undefined
  double spectral_centroid = 0.0;

  std::string to_csv() const;
};

// STFT analysis with a Hann window; one row per hop, ceil(len / hop) rows.
FeatureTable export_features(std::span<const double> signal, double sample_rate,
                             std::size_t frame_len = 512, std::size_t hop = 256);

}  // namespace rirlab
