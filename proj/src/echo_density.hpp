#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rir.hpp"

namespace rirlab {

// Normalised echo density profile; frames start at the direct arrival.
struct EchoDensityProfile {
  std::vector<double> times;  // frame centers, seconds
  std::vector<double> eta;
  double window_len = 0.0;
  double hop = 0.0;
};

struct MixingTime {
  double t_mix = 0.0;
  double threshold_used = 1.0;
  bool found = false;
};

inline constexpr double kDefaultEchoWindow = 0.020;
inline constexpr double kDefaultEchoHop = 0.002;

// erfc(1/sqrt(2)): expected fraction of Gaussian samples beyond one sigma.
double gaussian_tail_fraction();

// Frames are centered from the direct arrival (rir.tau_d) to the last
// sample. Windows are truncated at the RIR edges and their Hann weights
// renormalised.
EchoDensityProfile echo_density(const Rir& rir, double window_len = kDefaultEchoWindow,
                                double hop = kDefaultEchoHop);

// Earliest frame with eta >= threshold whose next two frames stay at or
// above 0.9 * threshold. Frames before `earliest` are skipped.
MixingTime mixing_time(const EchoDensityProfile& profile, double threshold = 1.0,
                       std::optional<double> earliest = std::nullopt);

std::string profile_to_csv(const EchoDensityProfile& profile);

}  // namespace rirlab
