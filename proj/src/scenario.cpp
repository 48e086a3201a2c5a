#include "scenario.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "rir_ops.hpp"

namespace rirlab {

std::string_view scenario_name(const ScenarioSpec& spec) {
  if (spec.time_calibrated) {
    return spec.level_calibrated ? "fully_calibrated" : "time_calibrated";
  }
  return spec.level_calibrated ? "level_calibrated" : "uncalibrated";
}

ScenarioSpec scenario_from_name(std::string_view name) {
  for (const auto& s : kAllScenarios) {
    if (scenario_name(s) == name) return s;
  }
  fail(ErrorCode::kInvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

LevelResult apply_level(std::vector<double> speech, const ScenarioSpec& spec, Rng& rng) {
  if (speech.empty()) fail(ErrorCode::kInvalidArgument, "speech must be non-empty");
  // Draw regardless of the flag so every scenario consumes the stream alike.
  const double g = uniform(rng, -kMaxGainDb, kMaxGainDb);
  if (spec.level_calibrated) return {std::move(speech), 0.0};
  const double k = db_to_gain(g);
  for (double& v : speech) v *= k;
  return {std::move(speech), g};
}

long max_delta_samples(double r_max, double sample_rate, double speed_of_sound) {
  return static_cast<long>(std::floor(r_max * sample_rate / speed_of_sound));
}

TimeResult apply_time(std::vector<double> wet, double tau_d, double sample_rate,
                      const ScenarioSpec& spec, Rng& rng, double r_max,
                      double speed_of_sound) {
  const long strip = std::lround(tau_d * sample_rate);
  if (strip < 0 || static_cast<std::size_t>(strip) >= wet.size()) {
    fail(ErrorCode::kDelayExceedsSignal, "propagation delay exceeds the signal length");
  }
  std::uniform_int_distribution<long> pick(
      0, max_delta_samples(r_max, sample_rate, speed_of_sound));
  const long delta = pick(rng);
  if (spec.time_calibrated) return {std::move(wet), strip};

  const std::size_t n = wet.size();
  std::vector<double> out(n, 0.0);
  // out[delta + i] = wet[strip + i]
  for (std::size_t i = 0; static_cast<std::size_t>(delta) + i < n &&
                          static_cast<std::size_t>(strip) + i < n;
       ++i) {
    out[static_cast<std::size_t>(delta) + i] = wet[static_cast<std::size_t>(strip) + i];
  }
  return {std::move(out), delta};
}

SampleOutput build_sample(const std::vector<double>& speech, const Rir& rir_variant,
                          const ScenarioSpec& spec, StageRngs rngs, double r_max,
                          double speed_of_sound) {
  auto level = apply_level(speech, spec, rngs.level);
  auto wet = convolve(level.signal, rir_variant.sample_rate, rir_variant);
  auto timed = apply_time(std::move(wet), rir_variant.tau_d, rir_variant.sample_rate, spec,
                          rngs.time, r_max, speed_of_sound);
  return {std::move(timed.signal), {timed.delta, level.gain_db}};
}

}  // namespace rirlab
