#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dataset.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "eval.hpp"
#include "test_util.hpp"

namespace rirlab {
namespace {

TEST(Onset, ImpulseDelay) {
  std::vector<double> x(1000, 0.0);
  x[160] = 1.0;
  const auto e = onset_delay_estimate(x, 16000.0);
  EXPECT_NEAR(e.r_hat, 3.43, 1e-12);
  EXPECT_EQ(e.method, "onset-delay");
}

TEST(Onset, RelativeThreshold) {
  std::vector<double> x(1000, 0.0);
  x[100] = 0.02;  // -34 dB: below the default threshold
  x[200] = 0.05;  // -26 dB: above it
  x[300] = 1.0;
  EXPECT_NEAR(onset_delay_estimate(x, 16000.0).r_hat, 200.0 / 16000.0 * 343.0, 1e-12);
  EXPECT_NEAR(onset_delay_estimate(x, 16000.0, 343.0, 0.01).r_hat, 100.0 / 16000.0 * 343.0, 1e-12);
}

TEST(Onset, FirstSampleStaysPositive) {
  const auto e = onset_delay_estimate(std::vector<double>{1.0, 0.5}, 16000.0);
  EXPECT_GT(e.r_hat, 0.0);
  EXPECT_NEAR(e.r_hat, 0.5 / 16000.0 * 343.0, 1e-15);
}

TEST(Onset, GainInvariant) {
  const auto x = testing::gaussian(5000, 1);
  for (double g : {1e-6, 0.3, 7.0, 1e5}) {
    auto y = x;
    for (double& v : y) v *= g;
    EXPECT_EQ(onset_delay_estimate(y, 16000.0).r_hat, onset_delay_estimate(x, 16000.0).r_hat);
  }
}

TEST(Onset, SilentSignal) {
  try {
    onset_delay_estimate(std::vector<double>(100, 0.0), 16000.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSilentSignal);
  }
  EXPECT_THROW(onset_delay_estimate(std::vector<double>{}, 16000.0), Error);
}

TEST(Onset, CalibrationGapOnSimulatedSamples) {
  DatasetConfig c;
  c.n = 20;
  c.folds = 5;
  c.duration_s = 3.0;
  c.seed = 5;
  DatasetGenerator gen(c);
  std::vector<double> r, timed, uncal;
  for (int i = 0; i < c.n; ++i) {
    const auto out = gen.generate_record(i);
    r.push_back(out.record.r);
    timed.push_back(onset_delay_estimate(out.waveforms[1][0], 16000.0).r_hat);
    uncal.push_back(onset_delay_estimate(out.waveforms[3][0], 16000.0).r_hat);
  }
  const double m_timed = mae(r, timed);
  EXPECT_LE(m_timed, 0.05);
  EXPECT_GE(mae(r, uncal), 10.0 * m_timed);
}

TEST(PriorMedian, Degenerate) {
  const std::vector<double> train{5, 5, 5};
  const PriorConstantBaseline b(train);
  EXPECT_EQ(b.value(), 5.0);
  const std::vector<double> pred(3, b.predict().r_hat);
  EXPECT_EQ(mae(train, pred), 0.0);
  EXPECT_EQ(b.predict().method, "prior-median");
  EXPECT_THROW(PriorConstantBaseline(std::vector<double>{}), Error);
}

TEST(PriorMedian, UniformPrior) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(1.0, 11.0);
  std::vector<double> train(50000), test(200000);
  for (double& v : train) v = u(gen);
  for (double& v : test) v = u(gen);
  const PriorConstantBaseline b(train);
  EXPECT_NEAR(b.value(), 6.0, 0.05);
  const std::vector<double> pred(test.size(), b.value());
  // (b - a) / 4 and 0.6 ln(36 / 11) for the median predictor on U[1, 11].
  EXPECT_NEAR(mae(test, pred), 2.5, 0.02);
  EXPECT_NEAR(relative_mae(test, pred), 0.6 * std::log(36.0 / 11.0), 0.005);
}

TEST(PriorMedian, PermutationInvariant) {
  auto train = testing::gaussian(101, 3);
  const double v = PriorConstantBaseline(train).value();
  std::mt19937_64 gen(4);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(train.begin(), train.end(), gen);
    EXPECT_EQ(PriorConstantBaseline(train).value(), v);
  }
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
}

TEST(Features, ZeroSignal) {
  const auto t = export_features(std::vector<double>(2000, 0.0), 16000.0);
  for (const auto& row : t.magnitudes) {
    for (double m : row) EXPECT_EQ(m, 0.0);
  }
  for (const auto& f : t.frames) {
    EXPECT_EQ(f.rms, 0.0);
    EXPECT_EQ(f.spectral_centroid, 0.0);
  }
  EXPECT_EQ(t.rms, 0.0);
}

TEST(Features, ToneCentroid) {
  const double f0 = 1000.0;
  std::vector<double> x(16000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * f0 * i / 16000.0);
  const auto t = export_features(x, 16000.0);
  const double bin = 16000.0 / 512.0;
  EXPECT_NEAR(t.spectral_centroid, f0, bin);
  for (std::size_t k = 0; k + 2 < t.frames.size(); ++k) EXPECT_NEAR(t.frames[k].spectral_centroid, f0, bin);
  EXPECT_NEAR(t.rms, std::sqrt(0.5), 1e-3);
}

TEST(Features, RowCountAndCsv) {
  for (std::size_t len : {1u, 255u, 256u, 257u, 10000u}) {
    const auto t = export_features(testing::gaussian(len, len), 16000.0);
    EXPECT_EQ(t.frames.size(), (len + 255) / 256) << len;
    EXPECT_EQ(t.magnitudes.size(), t.frames.size());
    const auto csv = t.to_csv();
    EXPECT_GE(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), t.frames.size() + 1);
  }
  EXPECT_THROW(export_features(std::vector<double>{}, 16000.0), Error);
}

}  // namespace
}  // namespace rirlab
