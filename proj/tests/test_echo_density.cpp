#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "echo_density.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "rir_ops.hpp"
#include "room_sim.hpp"
#include "test_util.hpp"

namespace rirlab {
namespace {

Rir make_rir(std::vector<double> x, double fs = 16000.0, double tau_d = 0.0) {
  Rir r;
  r.samples = std::move(x);
  r.sample_rate = fs;
  r.tau_d = tau_d;
  return r;
}

// Echo density of one full-width frame centered on sample c, written from
// the definition: Hann weights normalised to unit sum, sigma the weighted
// RMS, eta the weighted fraction beyond sigma over erfc(1/sqrt(2)).
double oracle_eta(const std::vector<double>& h, long c, long win) {
  const long half = win / 2;
  std::vector<double> w(static_cast<std::size_t>(win));
  double sum = 0.0;
  for (long i = 0; i < win; ++i) {
    w[i] = std::pow(std::sin(std::numbers::pi * (i + 1) / (win + 1)), 2);
    sum += w[i];
  }
  double var = 0.0;
  for (long i = 0; i < win; ++i) var += w[i] / sum * h[c - half + i] * h[c - half + i];
  const double sigma = std::sqrt(var);
  double frac = 0.0;
  for (long i = 0; i < win; ++i) {
    if (std::abs(h[c - half + i]) > sigma) frac += w[i] / sum;
  }
  return frac / 0.3173105078629141;
}

std::vector<double> steady(const EchoDensityProfile& p, double fs, std::size_t len) {
  const double half = p.window_len / 2.0;
  std::vector<double> out;
  for (std::size_t i = 0; i < p.eta.size(); ++i) {
    if (p.times[i] - half >= 0.0 && p.times[i] + half < static_cast<double>(len) / fs) {
      out.push_back(p.eta[i]);
    }
  }
  return out;
}

TEST(EchoDensity, TailFractionConstant) {
  EXPECT_NEAR(gaussian_tail_fraction(), 0.31731, 1e-5);
}

TEST(EchoDensity, MatchesDefinitionOnInteriorFrames) {
  auto x = testing::gaussian(16000, 3);
  for (std::size_t i = 0; i < x.size(); i += 7) x[i] *= 6.0;  // heavy-tailed mix
  const auto p = echo_density(make_rir(x));
  const long win = 321;
  int checked = 0;
  for (std::size_t k = 0; k < p.eta.size(); ++k) {
    const long c = std::lround(p.times[k] * 16000.0);
    if (c - win / 2 < 0 || c + win / 2 >= 16000) continue;
    EXPECT_NEAR(p.eta[k], oracle_eta(x, c, win), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 400);
}

TEST(EchoDensity, WhiteNoiseAveragesToOne) {
  const auto x = testing::gaussian(32000, 11);
  const auto p = echo_density(make_rir(x));
  const auto s = steady(p, 16000.0, x.size());
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  EXPECT_GE(mean, 0.95);
  EXPECT_LE(mean, 1.05);
}

TEST(EchoDensity, WhiteNoiseEveryFrameNearOneWithLongWindow) {
  // At 20 ms a frame holds ~320 samples and eta fluctuates by about 0.1,
  // so the per-frame band is checked with a 500 ms window.
  const auto x = testing::gaussian(64000, 12);
  const auto p = echo_density(make_rir(x), 0.5, 0.01);
  const auto s = steady(p, 16000.0, x.size());
  ASSERT_GT(s.size(), 100u);
  for (double v : s) {
    EXPECT_GE(v, 0.9);
    EXPECT_LE(v, 1.1);
  }
}

TEST(EchoDensity, MedianOverHundredGaussianSequences) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = testing::gaussian(16000, 1000 + seed);
    auto s = steady(echo_density(make_rir(x)), 16000.0, x.size());
    std::sort(s.begin(), s.end());
    const double med = quantile_sorted(s, 0.5);
    EXPECT_GE(med, 0.95) << "seed " << seed;
    EXPECT_LE(med, 1.05) << "seed " << seed;
  }
}

TEST(EchoDensity, SingleImpulseFrame) {
  std::vector<double> x(16000, 0.0);
  x[8000] = 1.0;
  const auto p = echo_density(make_rir(x));
  const long win = 321;
  double wsum = 0.0;
  for (long i = 0; i < win; ++i) wsum += std::pow(std::sin(std::numbers::pi * (i + 1) / (win + 1)), 2);
  const auto it = std::find_if(p.times.begin(), p.times.end(),
                               [](double t) { return std::lround(t * 16000.0) == 8000; });
  ASSERT_NE(it, p.times.end());
  const double eta = p.eta[static_cast<std::size_t>(it - p.times.begin())];
  EXPECT_NEAR(eta, 1.0 / wsum / 0.3173105078629141, 1e-12);
  EXPECT_LT(eta, 0.05);
}

TEST(EchoDensity, ScaleInvariant) {
  const auto x = testing::gaussian(8000, 4);
  auto y = x;
  for (double& v : y) v *= 1234.5;
  const auto a = echo_density(make_rir(x));
  const auto b = echo_density(make_rir(y));
  ASSERT_EQ(a.eta.size(), b.eta.size());
  for (std::size_t i = 0; i < a.eta.size(); ++i) EXPECT_NEAR(a.eta[i], b.eta[i], 1e-6 * std::max(1.0, a.eta[i]));
}

TEST(EchoDensity, ProfileShape) {
  auto x = testing::gaussian(8000, 5);
  const auto p = echo_density(make_rir(x, 16000.0, 0.1));
  ASSERT_FALSE(p.times.empty());
  EXPECT_NEAR(p.times.front(), 0.1, 0.5 / 16000.0);
  for (std::size_t i = 1; i < p.times.size(); ++i) EXPECT_GT(p.times[i], p.times[i - 1]);
  for (double v : p.eta) EXPECT_GE(v, 0.0);
  EXPECT_EQ(p.window_len, kDefaultEchoWindow);
  EXPECT_EQ(p.hop, kDefaultEchoHop);
}

TEST(EchoDensity, Errors) {
  const auto x = testing::gaussian(4000, 6);
  try {
    echo_density(make_rir(x, 1000.0), 0.02, 0.002);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWindowTooShort);
  }
  EXPECT_THROW(echo_density(make_rir(x), 0.004, 0.002), Error);
  EXPECT_THROW(echo_density(make_rir(x), 0.02, 0.0), Error);
  EXPECT_THROW(echo_density(make_rir({})), Error);
}

TEST(MixingTime, WhiteNoiseMixesAtFirstFrame) {
  const auto p = echo_density(make_rir(testing::gaussian(16000, 21)));
  const auto m = mixing_time(p, 0.8);
  ASSERT_TRUE(m.found);
  EXPECT_EQ(m.t_mix, p.times.front());
}

TEST(MixingTime, DirectOnlyNeverMixes) {
  RoomSpec room;
  room.width = 8;
  room.length = 7;
  room.height = 3;
  room.absorption.fill(1.0);
  SimConfig cfg;
  cfg.max_image_order = 2;
  Rir rir = simulate_rir(room, SourceReceiverPair::make({2, 2, 1.6}, {6, 5, 1.8}), cfg);
  rir.samples.resize(rir.samples.size() + 8000, 0.0);
  EXPECT_FALSE(mixing_time(echo_density(rir)).found);
}

TEST(MixingTime, SustainedCrossingRule) {
  EchoDensityProfile p;
  p.times = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  p.eta = {0.2, 1.05, 0.5, 1.0, 0.95, 0.91, 0.3};
  const auto m = mixing_time(p, 1.0);
  ASSERT_TRUE(m.found);
  EXPECT_DOUBLE_EQ(m.t_mix, 0.3);
  EXPECT_EQ(m.threshold_used, 1.0);
  EXPECT_FALSE(mixing_time(p, 1.0, 0.35).found);
  EXPECT_THROW(mixing_time(p, 1.3), Error);
  EXPECT_THROW(mixing_time(p, 0.0), Error);
}

TEST(MixingTime, FoundFrameSatisfiesThreshold) {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto [room, pair] = sample_configuration(rng, uniform(rng, 1.0, 11.0), 0.05);
    SimConfig cfg;
    cfg.max_image_order = default_image_order(room, pair, cfg.speed_of_sound);
    const Rir rir = simulate_rir(room, pair, cfg);
    const auto p = echo_density(rir);
    const auto m = detect_mixing_time(rir);
    if (!m.found) continue;
    EXPECT_GE(m.t_mix, rir.tau_d + kDefaultGuard);
    const auto k = static_cast<std::size_t>(
        std::find(p.times.begin(), p.times.end(), m.t_mix) - p.times.begin());
    ASSERT_LT(k, p.eta.size());
    EXPECT_GE(p.eta[k], m.threshold_used);
  }
}

TEST(MixingTime, LargeReverberantRoom) {
  RoomSpec room;
  room.width = 15;
  room.length = 14;
  room.height = 7;
  room.absorption.fill(0.1);
  const auto pair = SourceReceiverPair::make({3.0, 4.0, 1.7}, {9.5, 8.0, 1.6});
  SimConfig cfg;
  cfg.max_image_order = default_image_order(room, pair, cfg.speed_of_sound);
  const auto m = detect_mixing_time(simulate_rir(room, pair, cfg));
  ASSERT_TRUE(m.found);
  EXPECT_GE(m.t_mix, 0.1);
  EXPECT_LE(m.t_mix, 0.25);
}

TEST(MixingTime, GrowsWithRoomVolume) {
  Rng rng(31);
  std::vector<double> volume, t_mix;
  for (int i = 0; i < 40; ++i) {
    auto [room, pair] = sample_configuration(rng, uniform(rng, 1.0, 6.0), 0.05);
    room.absorption.fill(0.3);
    SimConfig cfg;
    cfg.max_image_order = default_image_order(room, pair, cfg.speed_of_sound);
    const auto m = detect_mixing_time(simulate_rir(room, pair, cfg));
    if (!m.found) continue;
    volume.push_back(room.volume());
    t_mix.push_back(m.t_mix);
  }
  ASSERT_GT(volume.size(), 30u);
  EXPECT_GT(spearman_rho(volume, t_mix), 0.0);
}

TEST(EchoDensity, CsvExport) {
  EchoDensityProfile p;
  p.times = {0.0, 0.002};
  p.eta = {0.5, 1.0};
  EXPECT_EQ(profile_to_csv(p), "time_s,eta\n0,0.5\n0.002,1\n");
}

}  // namespace
}  // namespace rirlab
