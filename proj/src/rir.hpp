#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rirlab {

// A sampled room impulse response with its ground-truth propagation delay.
struct Rir {
  std::vector<double> samples;
  double sample_rate = 16000.0;
  double tau_d = 0.0;  // seconds; r / c
  std::string room_ref;
  std::string pair_ref;

  std::size_t size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

inline double energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

// Seconds of the largest-magnitude sample; stands in for tau_d when an RIR
// arrives without provenance.
inline double peak_time(const std::vector<double>& x, double sample_rate) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if ((x[i] < 0 ? -x[i] : x[i]) > (x[best] < 0 ? -x[best] : x[best])) best = i;
  }
  return static_cast<double>(best) / sample_rate;
}

}  // namespace rirlab
