#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "error.hpp"
#include "ism_oracle.hpp"
#include "room_sim.hpp"
#include "test_util.hpp"

namespace rirlab {
namespace {

RoomSpec uniform_room(double w, double l, double h, double alpha) {
  RoomSpec room;
  room.width = w;
  room.length = l;
  room.height = h;
  room.absorption.fill(alpha);
  return room;
}

using testing::brute_force_images;
using testing::sort_by_delay;

TEST(Sabine, HandEvaluatedRoom) {
  EXPECT_NEAR(sabine_t60(uniform_room(5, 4, 3, 0.2)), 0.161 * 60.0 / 18.8, 1e-12);
  EXPECT_NEAR(sabine_t60(uniform_room(5, 4, 3, 0.2)), 0.5138, 1e-4);
}

TEST(Sabine, InverseInAbsorption) {
  const double full = sabine_t60(uniform_room(7, 6, 3, 1.0));
  const double half = sabine_t60(uniform_room(7, 6, 3, 0.5));
  EXPECT_DOUBLE_EQ(full / half, 0.5);
}

TEST(Sabine, ZeroAbsorptionIsDegenerate) {
  try {
    sabine_t60(uniform_room(5, 4, 3, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateRoom);
  }
}

TEST(MeanFreePath, Formula) {
  EXPECT_NEAR(mean_free_path(uniform_room(5, 4, 3, 0.3)), 4.0 * 60.0 / 94.0, 1e-12);
  EXPECT_NEAR(mean_free_path(uniform_room(5, 4, 3, 0.3)), 2.553, 1e-3);
  EXPECT_NEAR(mean_free_path(uniform_room(6, 6, 6, 0.3)), 4.0, 1e-12);
  EXPECT_NEAR(mean_free_path(uniform_room(10, 8, 6, 0.3)),
              2.0 * mean_free_path(uniform_room(5, 4, 3, 0.3)), 1e-12);
}

TEST(ImageSources, MatchBruteForceEnumeration) {
  const auto room = uniform_room(6, 5, 3, 0.3);
  const auto pair = SourceReceiverPair::make({1.5, 1.5, 1.7}, {4.5, 3.5, 1.7});
  SimConfig cfg;
  cfg.max_image_order = 2;
  auto got = enumerate_images(room, pair, cfg);
  auto want = brute_force_images(room, pair, 2, cfg.speed_of_sound);
  ASSERT_EQ(got.size(), want.size());
  sort_by_delay(got);
  sort_by_delay(want);
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_LE(std::abs(got[i].delay - want[i].delay) * cfg.sample_rate, 0.5);
    EXPECT_NEAR(got[i].amplitude, want[i].amplitude, 1e-6 * want[i].amplitude);
    EXPECT_EQ(got[i].order, want[i].order);
  }
}

TEST(ImageSources, CountForOrderTwo) {
  // Images of order exactly k in 3-D number 4k^2 + 2 for k >= 1.
  SimConfig cfg;
  cfg.max_image_order = 2;
  const auto imgs = enumerate_images(uniform_room(6, 5, 3, 0.3),
                                     SourceReceiverPair::make({1.5, 1.5, 1.7}, {4.5, 3.5, 1.7}),
                                     cfg);
  EXPECT_EQ(imgs.size(), 1u + 6u + 18u);
}

TEST(SimulateRir, MatchesBruteForceRendering) {
  const auto room = uniform_room(6, 5, 3, 0.3);
  const auto pair = SourceReceiverPair::make({1.5, 1.5, 1.7}, {4.5, 3.5, 1.7});
  SimConfig cfg;
  cfg.max_image_order = 2;
  const Rir rir = simulate_rir(room, pair, cfg);
  std::vector<double> oracle(rir.size(), 0.0);
  const int half = cfg.frac_delay_taps / 2;
  for (const auto& img : brute_force_images(room, pair, 2, cfg.speed_of_sound)) {
    const double center = img.delay * cfg.sample_rate;
    const long n0 = std::lround(center);
    for (long n = n0 - half; n <= n0 + half; ++n) {
      const double x = static_cast<double>(n) - center;
      const double w = 0.5 * (1.0 + std::cos(std::numbers::pi * x / (half + 1)));
      const double s = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      ASSERT_LT(static_cast<std::size_t>(n), oracle.size());
      oracle[static_cast<std::size_t>(n)] += img.amplitude * w * s;
    }
  }
  const double peak = testing::max_abs(oracle);
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    ASSERT_NEAR(rir.samples[i], oracle[i], 1e-9 * peak) << "sample " << i;
  }
}

TEST(SimulateRir, AnechoicIsSinglePulse) {
  const auto room = uniform_room(8, 7, 3, 1.0);
  const auto pair = SourceReceiverPair::make({2.0, 2.0, 1.6}, {5.3, 4.1, 1.8});
  SimConfig cfg;
  cfg.max_image_order = 3;
  const Rir rir = simulate_rir(room, pair, cfg);
  EXPECT_NEAR(rir.tau_d, pair.r / cfg.speed_of_sound, 1e-12);
  const long n0 = std::lround(rir.tau_d * cfg.sample_rate);
  for (std::size_t i = 0; i < rir.size(); ++i) {
    if (std::labs(static_cast<long>(i) - n0) > 40) EXPECT_EQ(rir.samples[i], 0.0);
  }
  std::size_t arg = 0;
  for (std::size_t i = 0; i < rir.size(); ++i) {
    if (std::abs(rir.samples[i]) > std::abs(rir.samples[arg])) arg = i;
  }
  EXPECT_LE(std::labs(static_cast<long>(arg) - n0), 1);
  EXPECT_LE(testing::max_abs(rir.samples), 1.0 / pair.r + 1e-12);
  EXPECT_GE(testing::max_abs(rir.samples), 0.6 / pair.r);
}

TEST(SimulateRir, InverseDistanceLaw) {
  // 1.715 m and 3.43 m are exactly 80 and 160 samples at 16 kHz.
  const auto room = uniform_room(10, 8, 4, 1.0);
  SimConfig cfg;
  const auto near = simulate_rir(room, SourceReceiverPair::make({2, 2, 1.8}, {3.715, 2, 1.8}), cfg);
  const auto far = simulate_rir(room, SourceReceiverPair::make({2, 2, 1.8}, {5.43, 2, 1.8}), cfg);
  EXPECT_NEAR(testing::max_abs(far.samples) / testing::max_abs(near.samples), 0.5, 1e-9);
}

TEST(SimulateRir, DirectArrivalNearRoundedDelay) {
  Rng rng(1234);
  SimConfig cfg;
  cfg.max_image_order = 1;
  for (int i = 0; i < 1000; ++i) {
    const auto [room, pair] = sample_configuration(rng, uniform(rng, 1.0, 11.0), 0.05);
    const Rir rir = simulate_rir(room, pair, cfg);
    const long n0 = std::lround(pair.r / cfg.speed_of_sound * cfg.sample_rate);
    // The direct pulse is the largest within its own kernel span and the
    // earliest one in the response.
    long first = -1;
    for (std::size_t k = 0; k < rir.size(); ++k) {
      if (rir.samples[k] != 0.0) {
        first = static_cast<long>(k);
        break;
      }
    }
    ASSERT_GE(first, n0 - 40);
    long arg = first;
    for (long k = first; k <= n0 + 41 && k < static_cast<long>(rir.size()); ++k) {
      if (std::abs(rir.samples[k]) > std::abs(rir.samples[arg])) arg = k;
    }
    EXPECT_LE(std::labs(arg - n0), cfg.frac_delay_taps / 2 + 1);
  }
}

TEST(SimulateRir, EnergyFallsWithAbsorption) {
  const auto pair = SourceReceiverPair::make({1.5, 1.5, 1.7}, {4.5, 3.5, 1.7});
  SimConfig cfg;
  cfg.max_image_order = 12;
  const double soft = energy(simulate_rir(uniform_room(6, 5, 3, 0.8), pair, cfg).samples);
  const double hard = energy(simulate_rir(uniform_room(6, 5, 3, 0.2), pair, cfg).samples);
  EXPECT_LE(soft, hard);
}

TEST(SimulateRir, BitDeterministic) {
  Rng rng(99);
  const auto [room, pair] = sample_configuration(rng, 6.0, 0.05);
  SimConfig cfg;
  cfg.max_image_order = 8;
  EXPECT_EQ(simulate_rir(room, pair, cfg).samples, simulate_rir(room, pair, cfg).samples);
}

TEST(SimulateRir, DefaultOrderFollowsPathRule) {
  const auto room = uniform_room(3.5, 3.2, 2.5, 0.9);
  const auto pair = SourceReceiverPair::make({1.0, 1.0, 1.6}, {2.5, 2.2, 1.7});
  const double c = 343.0;
  const double needed = c * (sabine_t60(room) + 0.1);
  int expected = -1;
  for (int n = 0; n <= 60 && expected < 0; ++n) {
    double longest = 0.0;
    for (const auto& img : brute_force_images(room, pair, n, c)) {
      if (img.order == n) longest = std::max(longest, img.delay * c);
    }
    if (longest > needed) expected = n;
  }
  ASSERT_GT(expected, 0);
  EXPECT_EQ(default_image_order(room, pair, c), expected);
}

bool within_limits(const RoomSpec& room, const SourceReceiverPair& pair) {
  const GeometryLimits lim;
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(room.width, 3, 15) || !in(room.length, 3, 15) || !in(room.height, 2, 7)) return false;
  for (const Vec3& p : {pair.source, pair.mic}) {
    if (!in(p.z, 1.5, 2.2)) return false;
    if (p.x <= lim.surface_margin || room.width - p.x <= lim.surface_margin) return false;
    if (p.y <= lim.surface_margin || room.length - p.y <= lim.surface_margin) return false;
    if (p.z <= lim.surface_margin || room.height - p.z <= lim.surface_margin) return false;
  }
  const double dx = pair.source.x - pair.mic.x;
  const double dy = pair.source.y - pair.mic.y;
  const double dz = pair.source.z - pair.mic.z;
  const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
  return r > 1.0 && std::abs(r - pair.r) <= 1e-9;
}

TEST(SampleConfiguration, TenThousandDrawsSatisfyConstraints) {
  const auto& table = MaterialTable::builtin();
  std::set<double> wall, floor, ceiling;
  for (const auto& m : table.wall) wall.insert(m.absorption);
  for (const auto& m : table.floor) floor.insert(m.absorption);
  for (const auto& m : table.ceiling) ceiling.insert(m.absorption);

  Rng rng(2024);
  std::vector<int> hist(10, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const double target = uniform(rng, 1.0, 11.0);
    const auto [room, pair] = sample_configuration(rng, target, 0.01);
    ASSERT_TRUE(within_limits(room, pair));
    ASSERT_LE(std::abs(pair.r - target), 0.01 + 1e-12);
    for (int s = kWallX0; s <= kWallY1; ++s) ASSERT_TRUE(wall.count(room.absorption[s]));
    ASSERT_TRUE(floor.count(room.absorption[kFloor]));
    ASSERT_TRUE(ceiling.count(room.absorption[kCeiling]));
    ++hist[std::min(9, static_cast<int>(pair.r - 1.0))];
  }
  double chi2 = 0.0;
  for (int h : hist) chi2 += (h - draws / 10.0) * (h - draws / 10.0) / (draws / 10.0);
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(9), chi2));
  EXPECT_GT(p, 0.01);
}

TEST(SampleConfiguration, ShortTarget) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto [room, pair] = sample_configuration(rng, 1.0, 0.05);
    EXPECT_GT(pair.r, 1.0);
    EXPECT_LE(pair.r, 1.05);
    EXPECT_GE(pair.source.z, 1.5);
    EXPECT_LE(pair.mic.z, 2.2);
  }
}

TEST(SampleConfiguration, UnreachableTargetIsInfeasible) {
  Rng rng(5);
  try {
    sample_configuration(rng, 20.0, 0.05);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGeometryInfeasible);
  }
}

TEST(SampleConfiguration, SameSeedSameDraw) {
  Rng a(77), b(77);
  const auto x = sample_configuration(a, 4.0, 0.01);
  const auto y = sample_configuration(b, 4.0, 0.01);
  EXPECT_EQ(x.first.width, y.first.width);
  EXPECT_EQ(x.second.source.x, y.second.source.x);
  EXPECT_EQ(x.second.mic.y, y.second.mic.y);
}

TEST(Validation, RejectsOutOfRangeGeometry) {
  EXPECT_THROW(validate_room(uniform_room(2.9, 5, 3, 0.3)), Error);
  EXPECT_THROW(validate_room(uniform_room(5, 5, 7.5, 0.3)), Error);
  EXPECT_THROW(validate_room(uniform_room(5, 5, 3, 0.0)), Error);
  EXPECT_NO_THROW(validate_room(uniform_room(5, 5, 3, 1.0)));
  const auto room = uniform_room(6, 5, 3, 0.3);
  EXPECT_THROW(validate_pair(room, SourceReceiverPair::make({0.4, 2, 1.7}, {4, 3, 1.7})), Error);
  EXPECT_THROW(validate_pair(room, SourceReceiverPair::make({2, 2, 1.4}, {4, 3, 1.7})), Error);
  EXPECT_THROW(validate_pair(room, SourceReceiverPair::make({2, 2, 1.7}, {2.5, 2.5, 1.7})), Error);
  auto stale = SourceReceiverPair::make({2, 2, 1.7}, {4, 3, 1.7});
  stale.r += 1e-6;
  EXPECT_THROW(validate_pair(room, stale), Error);
}

TEST(Materials, BuiltinTableShape) {
  const auto& t = MaterialTable::builtin();
  EXPECT_EQ(t.wall.size(), 13u);
  EXPECT_EQ(t.floor.size(), 7u);
  EXPECT_EQ(t.ceiling.size(), 8u);
  double lo = 1.0, hi = 0.0;
  for (const auto* group : {&t.wall, &t.floor, &t.ceiling}) {
    for (const auto& m : *group) {
      lo = std::min(lo, m.absorption);
      hi = std::max(hi, m.absorption);
    }
  }
  EXPECT_DOUBLE_EQ(lo, 0.02);
  EXPECT_DOUBLE_EQ(hi, 0.9);
}

TEST(Materials, ShippedDataFileMatchesBuiltin) {
  const auto file = MaterialTable::from_json_file(RIRLAB_SOURCE_DIR "/data/materials.json");
  EXPECT_EQ(file.to_json_text(), MaterialTable::builtin().to_json_text());
}

TEST(Materials, JsonRoundTrip) {
  const auto& t = MaterialTable::builtin();
  EXPECT_EQ(MaterialTable::from_json_text(t.to_json_text()).to_json_text(), t.to_json_text());
  EXPECT_THROW(MaterialTable::from_json_text("{\"wall\": []}"), Error);
}

}  // namespace
}  // namespace rirlab
