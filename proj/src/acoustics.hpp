#pragma once

#include <optional>

#include "rir.hpp"
#include "room_sim.hpp"

namespace rirlab {

// A level in dB that may be unbounded (zero energy in the denominator).
struct Decibels {
  double db = 0.0;
  bool unbounded = false;

  static Decibels infinite() { return {0.0, true}; }
};

struct AcousticMetrics {
  Decibels drr;
  Decibels c50;
  std::optional<double> t60_schroeder;  // empty when the decay is too short
  std::optional<double> t60_sabine;     // empty when no room is known
};

// 10 log10(E[t <= t_d] / E[t > t_d]); unbounded when the tail holds less
// than 1e-12 of the total energy.
Decibels drr(const Rir& rir, double t_d);

// Early window [arrival, arrival + 50 ms) against everything later.
Decibels c50(const Rir& rir, double arrival);

// Energy decay curve in dB relative to total energy (Schroeder backward
// integration). -inf where the remaining energy is zero.
std::vector<double> energy_decay_curve_db(const Rir& rir);

// Least-squares fit of the EDC between -5 and -25 dB, extrapolated to
// 60 dB. InsufficientDecay when the EDC never reaches -25 dB or the fit
// segment spans less than 10 ms.
double schroeder_t60(const Rir& rir);

// DRR at tau_d + guard, C50 at tau_d, Schroeder T60 when measurable.
AcousticMetrics compute_metrics(const Rir& rir, double guard = 0.002,
                                const RoomSpec* room = nullptr);

}  // namespace rirlab
