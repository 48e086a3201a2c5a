#include "echo_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace rirlab {

namespace {

std::size_t arrival_index(const Rir& rir) {
  const auto n = static_cast<std::size_t>(std::llround(std::max(0.0, rir.tau_d) * rir.sample_rate));
  return std::min(n, rir.samples.size() - 1);
}

}  // namespace

double gaussian_tail_fraction() { return std::erfc(1.0 / std::numbers::sqrt2); }

EchoDensityProfile echo_density(const Rir& rir, double window_len, double hop) {
  if (rir.samples.empty()) fail(ErrorCode::kEmptyRir, "echo density of an empty RIR");
  if (!(window_len >= 0.005)) {
    fail(ErrorCode::kInvalidArgument, "echo density window must be >= 5 ms");
  }
  if (!(hop > 0.0)) fail(ErrorCode::kInvalidArgument, "echo density hop must be > 0");

  const double fs = rir.sample_rate;
  const long win = std::lround(window_len * fs) | 1L;  // odd, centered
  if (win < 32) {
    fail(ErrorCode::kWindowTooShort, "echo density window spans fewer than 32 samples");
  }
  const long half = win / 2;

  std::vector<double> w(static_cast<std::size_t>(win));
  for (long i = 0; i < win; ++i) {
    w[static_cast<std::size_t>(i)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 1) / (win + 1));
  }

  const double norm = 1.0 / gaussian_tail_fraction();
  const long n = static_cast<long>(rir.samples.size());
  const double start = static_cast<double>(arrival_index(rir));

  EchoDensityProfile p;
  p.window_len = window_len;
  p.hop = hop;
  for (std::size_t k = 0;; ++k) {
    const double center_s = start + static_cast<double>(k) * hop * fs;
    const long c = std::lround(center_s);
    if (c >= n) break;
    const long lo = std::max(0L, c - half);
    const long hi = std::min(n - 1, c + half);
    double wsum = 0.0;
    double power = 0.0;
    for (long i = lo; i <= hi; ++i) {
      const double wi = w[static_cast<std::size_t>(i - c + half)];
      const double h = rir.samples[static_cast<std::size_t>(i)];
      wsum += wi;
      power += wi * h * h;
    }
    const double sigma = std::sqrt(power / wsum);
    double above = 0.0;
    for (long i = lo; i <= hi; ++i) {
      if (std::abs(rir.samples[static_cast<std::size_t>(i)]) > sigma) {
        above += w[static_cast<std::size_t>(i - c + half)];
      }
    }
    p.times.push_back(static_cast<double>(c) / fs);
    p.eta.push_back(norm * above / wsum);
  }
  return p;
}

MixingTime mixing_time(const EchoDensityProfile& profile, double threshold,
                       std::optional<double> earliest) {
  if (profile.eta.empty()) fail(ErrorCode::kInvalidArgument, "empty echo density profile");
  if (!(threshold > 0.0 && threshold <= 1.2)) {
    fail(ErrorCode::kInvalidArgument, "mixing time threshold outside (0, 1.2]");
  }
  MixingTime m;
  m.threshold_used = threshold;
  const std::size_t n = profile.eta.size();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    if (earliest && profile.times[i] < *earliest) continue;
    if (profile.eta[i] >= threshold && profile.eta[i + 1] >= 0.9 * threshold &&
        profile.eta[i + 2] >= 0.9 * threshold) {
      m.t_mix = profile.times[i];
      m.found = true;
      return m;
    }
  }
  return m;
}

std::string profile_to_csv(const EchoDensityProfile& profile) {
  std::ostringstream os;
  os << "time_s,eta\n";
  char buf[64];
  for (std::size_t i = 0; i < profile.eta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", profile.times[i], profile.eta[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace rirlab
