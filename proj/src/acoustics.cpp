#include "acoustics.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace rirlab {

namespace {

Decibels energy_ratio_db(double num, double den) {
  const double total = num + den;
  if (!(total > 0.0)) fail(ErrorCode::kEmptyRir, "RIR carries no energy");
  if (den < 1e-12 * total) return Decibels::infinite();
  return {10.0 * std::log10(num / den), false};
}

}  // namespace

Decibels drr(const Rir& rir, double t_d) {
  if (rir.samples.empty()) fail(ErrorCode::kEmptyRir, "DRR of an empty RIR");
  double direct = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < rir.samples.size(); ++i) {
    const double t = static_cast<double>(i) / rir.sample_rate;
    const double e = rir.samples[i] * rir.samples[i];
    (t <= t_d ? direct : tail) += e;
  }
  return energy_ratio_db(direct, tail);
}

Decibels c50(const Rir& rir, double arrival) {
  if (rir.samples.empty()) fail(ErrorCode::kEmptyRir, "C50 of an empty RIR");
  const double split = arrival + 0.050;
  double early = 0.0;
  double late = 0.0;
  for (std::size_t i = 0; i < rir.samples.size(); ++i) {
    const double t = static_cast<double>(i) / rir.sample_rate;
    if (t < arrival) continue;
    const double e = rir.samples[i] * rir.samples[i];
    (t < split ? early : late) += e;
  }
  return energy_ratio_db(early, late);
}

std::vector<double> energy_decay_curve_db(const Rir& rir) {
  if (rir.samples.empty()) fail(ErrorCode::kEmptyRir, "EDC of an empty RIR");
  std::vector<double> edc(rir.samples.size());
  double acc = 0.0;
  for (std::size_t i = rir.samples.size(); i-- > 0;) {
    acc += rir.samples[i] * rir.samples[i];
    edc[i] = acc;
  }
  const double total = acc;
  if (!(total > 0.0)) fail(ErrorCode::kEmptyRir, "RIR carries no energy");
  for (double& v : edc) {
    v = v > 0.0 ? 10.0 * std::log10(v / total) : -std::numeric_limits<double>::infinity();
  }
  return edc;
}

double schroeder_t60(const Rir& rir) {
  const auto edc = energy_decay_curve_db(rir);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  std::size_t first = 0, last = 0;
  bool reached = false;
  for (std::size_t i = 0; i < edc.size(); ++i) {
    const double y = edc[i];
    if (y < -25.0) {
      reached = true;
      break;
    }
    if (y > -5.0) continue;
    const double x = static_cast<double>(i) / rir.sample_rate;
    if (n == 0) first = i;
    last = i;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (!reached) fail(ErrorCode::kInsufficientDecay, "EDC never reaches -25 dB");
  const double span = static_cast<double>(last - first) / rir.sample_rate;
  if (n < 2 || span < 0.010) {
    fail(ErrorCode::kInsufficientDecay, "-5..-25 dB segment shorter than 10 ms");
  }
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);  // dB per second
  if (!(slope < 0.0)) fail(ErrorCode::kInsufficientDecay, "EDC fit is not decaying");
  return -60.0 / slope;
}

AcousticMetrics compute_metrics(const Rir& rir, double guard, const RoomSpec* room) {
  AcousticMetrics m;
  m.drr = drr(rir, rir.tau_d + guard);
  m.c50 = c50(rir, rir.tau_d);
  try {
    m.t60_schroeder = schroeder_t60(rir);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientDecay) throw;
  }
  if (room) m.t60_sabine = sabine_t60(*room);
  return m;
}

}  // namespace rirlab
