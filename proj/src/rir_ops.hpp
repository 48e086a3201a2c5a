#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "echo_density.hpp"
#include "rir.hpp"

namespace rirlab {

struct Boundaries {
  double tau_d = 0.0;  // direct arrival, seconds
  double t_d = 0.0;    // tau_d + guard
  double t_mix = 0.0;
  double guard = 0.002;
  double fade = 0.005;
};

enum class Variant { kFull = 0, kDirect, kNoLate, kNoEarly };
inline constexpr Variant kAllVariants[] = {Variant::kFull, Variant::kDirect,
                                           Variant::kNoLate, Variant::kNoEarly};

// File-name suffix / directory name: full, direct, nolate, noearly.
std::string_view variant_name(Variant v);
Variant variant_from_name(std::string_view name);

struct RirVariantSet {
  Rir full;
  Rir direct_only;
  Rir no_late;
  Rir no_early;
  Boundaries boundaries;

  const Rir& get(Variant v) const;
};

inline constexpr double kDefaultGuard = 0.002;
inline constexpr double kDefaultFade = 0.005;

// Half-cosine window that stays 1 up to `boundary` and reaches 0 at
// `boundary + fade`.
double fade_out(double t, double boundary, double fade);
// Mirror of fade_out: 0 up to `boundary - fade`, 1 from `boundary` on.
double fade_in(double t, double boundary, double fade);

// Splits an RIR into direct-only, no-late and no-early variants. All
// variants keep the length of the input. Requires
// t_mix > tau_d + guard + 2 * fade (BoundaryOrderViolation otherwise).
RirVariantSet decompose(const Rir& rir, double t_mix, double guard = kDefaultGuard,
                        double fade = kDefaultFade);

// Mixing time searched from the first boundary decompose accepts,
// tau_d + guard + 2 * fade plus one sample.
MixingTime detect_mixing_time(const Rir& rir, double guard = kDefaultGuard,
                              double fade = kDefaultFade, double threshold = 1.0);

// Full linear convolution, length len(signal) + len(kernel) - 1. Uses a
// direct sum for short inputs and FFTs otherwise.
std::vector<double> convolve(std::span<const double> signal, std::span<const double> kernel);
std::vector<double> convolve(std::span<const double> signal, double signal_rate,
                             const Rir& rir);

}  // namespace rirlab
