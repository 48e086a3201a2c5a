#pragma once

#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

#include "rir.hpp"
#include "rng.hpp"

namespace rirlab {

struct ScenarioSpec {
  bool time_calibrated = true;
  bool level_calibrated = true;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

inline constexpr ScenarioSpec kFullyCalibrated{true, true};
inline constexpr ScenarioSpec kTimeCalibrated{true, false};
inline constexpr ScenarioSpec kLevelCalibrated{false, true};
inline constexpr ScenarioSpec kUncalibrated{false, false};
inline constexpr ScenarioSpec kAllScenarios[] = {kFullyCalibrated, kTimeCalibrated,
                                                 kLevelCalibrated, kUncalibrated};

// fully_calibrated, time_calibrated, level_calibrated, uncalibrated.
std::string_view scenario_name(const ScenarioSpec& spec);
ScenarioSpec scenario_from_name(std::string_view name);

struct DecalibrationDraw {
  long delta = 0;       // samples of leading silence in the output
  double gain_db = 0.0;
};

inline constexpr double kMaxGainDb = 6.0;

struct LevelResult {
  std::vector<double> signal;
  double gain_db = 0.0;
};

// Level decalibration: G ~ U(-6, 6) dB applied to the dry speech.
LevelResult apply_level(std::vector<double> speech, const ScenarioSpec& spec, Rng& rng);

struct TimeResult {
  std::vector<double> signal;
  long delta = 0;
};

// Largest admissible prepended silence, floor(r_max * fs / c).
long max_delta_samples(double r_max, double sample_rate, double speed_of_sound);

// Time decalibration: strips round(tau_d * fs) leading samples and prepends
// delta ~ U{0..max_delta_samples} zeros, keeping the input length. For a
// calibrated spec the input is returned as is and delta = round(tau_d * fs).
TimeResult apply_time(std::vector<double> wet, double tau_d, double sample_rate,
                      const ScenarioSpec& spec, Rng& rng, double r_max,
                      double speed_of_sound = 343.0);

struct SampleOutput {
  std::vector<double> waveform;
  DecalibrationDraw draw;
};

// Generators for the two decalibration stages. Callers pass streams keyed
// on the sample, not on the scenario, so all scenarios of a sample share
// the same draws.
struct StageRngs {
  Rng level;
  Rng time;
};

// apply_level -> convolve -> apply_time.
SampleOutput build_sample(const std::vector<double>& speech, const Rir& rir_variant,
                          const ScenarioSpec& spec, StageRngs rngs, double r_max,
                          double speed_of_sound = 343.0);

inline double db_to_gain(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace rirlab
