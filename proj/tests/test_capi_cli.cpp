#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rirlab/rirlab.h"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using rirlab::testing::TempDir;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = "env -u RIRLAB_SEED " + std::string(RIRLAB_CLI) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

rl_room box(double w, double l, double h, double alpha) {
  rl_room room{w, l, h, {}};
  for (double& a : room.absorption) a = alpha;
  return room;
}

// ---- C API ----

TEST(CApi, StatusNamesAndLastError) {
  EXPECT_STREQ(rl_status_name(RL_OK), "OK");
  EXPECT_STREQ(rl_status_name(RL_ERR_GEOMETRY_INFEASIBLE), "GeometryInfeasible");
  EXPECT_GT(std::string(rl_version()).size(), 0u);
  double t60 = 0.0;
  const rl_room bad = box(5.0, 4.0, 3.0, 0.0);
  EXPECT_EQ(rl_sabine_t60(&bad, &t60), RL_ERR_DEGENERATE_ROOM);
  EXPECT_GT(std::string(rl_last_error()).size(), 0u);
  const rl_room good = box(5.0, 4.0, 3.0, 0.2);
  ASSERT_EQ(rl_sabine_t60(&good, &t60), RL_OK);
  EXPECT_NEAR(t60, 0.5138, 1e-4);
  EXPECT_STREQ(rl_last_error(), "");
  EXPECT_EQ(rl_sabine_t60(nullptr, &t60), RL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, SimulateSaveLoad) {
  TempDir dir;
  const rl_room room = box(6.0, 5.0, 3.0, 0.3);
  const rl_pair pair{{1.5, 1.5, 1.7}, {4.5, 3.5, 1.7}};
  rl_sim_config cfg;
  rl_sim_config_default(&cfg);
  EXPECT_EQ(cfg.sample_rate, 16000.0);
  rl_rir* rir = nullptr;
  ASSERT_EQ(rl_simulate(&room, &pair, &cfg, &rir), RL_OK);
  const double r = std::sqrt(9.0 + 4.0);
  EXPECT_NEAR(rl_rir_tau_d(rir), r / 343.0, 1e-12);
  EXPECT_EQ(rl_rir_sample_rate(rir), 16000.0);
  const std::size_t n = rl_rir_length(rir);
  ASSERT_GT(n, 1000u);
  const std::string path = dir.file("h.wav");
  ASSERT_EQ(rl_rir_save(rir, path.c_str()), RL_OK);
  EXPECT_TRUE(fs::exists(dir.file("h.json")));

  rl_rir* back = nullptr;
  ASSERT_EQ(rl_rir_load(path.c_str(), &back), RL_OK);
  ASSERT_EQ(rl_rir_length(back), n);
  EXPECT_EQ(rl_rir_tau_d(back), rl_rir_tau_d(rir));
  for (std::size_t i = 0; i < n; ++i) {
    ASSERT_NEAR(rl_rir_samples(back)[i], rl_rir_samples(rir)[i], 1e-7);
  }
  rl_rir_free(back);
  rl_rir_free(rir);
  EXPECT_EQ(rl_rir_load(dir.file("missing.wav").c_str(), &back), RL_ERR_IO);
}

TEST(CApi, SampleConfiguration) {
  rl_room room;
  rl_pair pair;
  ASSERT_EQ(rl_sample_configuration(5, 0, 4.0, 0.01, &room, &pair), RL_OK);
  const double dx = pair.source[0] - pair.mic[0], dy = pair.source[1] - pair.mic[1],
               dz = pair.source[2] - pair.mic[2];
  EXPECT_NEAR(std::sqrt(dx * dx + dy * dy + dz * dz), 4.0, 0.01);
  EXPECT_EQ(rl_validate_geometry(&room, &pair), RL_OK);
  EXPECT_EQ(rl_sample_configuration(5, 0, 20.0, 0.01, &room, &pair), RL_ERR_GEOMETRY_INFEASIBLE);
  rl_pair outside = pair;
  outside.mic[0] = room.width + 1.0;
  EXPECT_EQ(rl_validate_geometry(&room, &outside), RL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, EchoDensityDecomposeMetrics) {
  rl_room room;
  rl_pair pair;
  ASSERT_EQ(rl_sample_configuration(8, 1, 5.0, 0.01, &room, &pair), RL_OK);
  rl_sim_config cfg;
  rl_sim_config_default(&cfg);
  rl_rir* rir = nullptr;
  ASSERT_EQ(rl_simulate(&room, &pair, &cfg, &rir), RL_OK);

  std::size_t frames = 0;
  ASSERT_EQ(rl_echo_density(rir, 0.02, 0.002, nullptr, nullptr, 0, &frames), RL_OK);
  ASSERT_GT(frames, 10u);
  std::vector<double> t(frames), eta(frames);
  ASSERT_EQ(rl_echo_density(rir, 0.02, 0.002, t.data(), eta.data(), frames, &frames), RL_OK);
  EXPECT_NEAR(t[0], rl_rir_tau_d(rir), 1.0 / 16000.0);
  EXPECT_EQ(rl_echo_density(rir, 0.02, 0.002, t.data(), eta.data(), 1, &frames),
            RL_ERR_INVALID_ARGUMENT);

  double t_mix = 0.0;
  int found = 0;
  ASSERT_EQ(rl_mixing_time(rir, 1.0, &t_mix, &found), RL_OK);
  ASSERT_TRUE(found);

  rl_variants* set = nullptr;
  ASSERT_EQ(rl_decompose(rir, 0.0, 0.002, 0.005, &set), RL_OK);
  rl_boundaries b;
  ASSERT_EQ(rl_variants_boundaries(set, &b), RL_OK);
  EXPECT_EQ(b.t_mix, t_mix);
  EXPECT_NEAR(b.t_d, b.tau_d + 0.002, 1e-15);
  const rl_rir* direct = nullptr;
  ASSERT_EQ(rl_variants_get(set, RL_VARIANT_DIRECT, &direct), RL_OK);
  ASSERT_EQ(rl_rir_length(direct), rl_rir_length(rir));
  const std::size_t after = static_cast<std::size_t>(std::ceil((b.t_d + b.fade) * 16000.0));
  for (std::size_t i = after; i < rl_rir_length(direct); ++i) ASSERT_EQ(rl_rir_samples(direct)[i], 0.0);

  TempDir dir;
  ASSERT_EQ(rl_variants_save(set, dir.path().c_str(), "x"), RL_OK);
  for (const char* f : {"x.full.wav", "x.direct.wav", "x.nolate.wav", "x.noearly.wav", "x.boundaries.json"}) {
    EXPECT_TRUE(fs::exists(dir.path() / f)) << f;
  }
  rl_variants_free(set);

  EXPECT_EQ(rl_decompose(rir, b.tau_d + 0.005, 0.002, 0.005, &set), RL_ERR_BOUNDARY_ORDER);

  rl_metrics m;
  ASSERT_EQ(rl_metrics_compute(rir, 0.002, &m), RL_OK);
  EXPECT_FALSE(m.drr_unbounded);
  EXPECT_TRUE(m.has_t60_sabine);
  rl_rir_free(rir);
}

TEST(CApi, FromSamplesAndOnset) {
  std::vector<double> x(1000, 0.0);
  x[160] = 1.0;
  double r_hat = 0.0;
  ASSERT_EQ(rl_onset_estimate(x.data(), x.size(), 16000.0, 343.0, 0.0316, &r_hat), RL_OK);
  EXPECT_NEAR(r_hat, 3.43, 1e-12);
  std::vector<double> z(10, 0.0);
  EXPECT_EQ(rl_onset_estimate(z.data(), z.size(), 16000.0, 343.0, 0.0316, &r_hat), RL_ERR_SILENT_SIGNAL);

  rl_rir* rir = nullptr;
  ASSERT_EQ(rl_rir_from_samples(x.data(), x.size(), 16000.0, -1.0, &rir), RL_OK);
  EXPECT_NEAR(rl_rir_tau_d(rir), 0.01, 1e-15);
  rl_metrics m;
  ASSERT_EQ(rl_metrics_compute(rir, 0.002, &m), RL_OK);
  EXPECT_TRUE(m.drr_unbounded);
  EXPECT_FALSE(m.has_t60_schroeder);
  EXPECT_FALSE(m.has_t60_sabine);
  rl_rir_free(rir);
  EXPECT_EQ(rl_rir_from_samples(nullptr, 0, 16000.0, 0.0, &rir), RL_ERR_EMPTY_RIR);
  EXPECT_EQ(rl_rir_from_samples(nullptr, 4, 16000.0, 0.0, &rir), RL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, DatasetConfigErrors) {
  std::size_t n = 0;
  EXPECT_EQ(rl_dataset_generate(R"({"n": 24, "seed": 1, "out_dir": "/tmp/x"})", 1, nullptr, nullptr, &n),
            RL_ERR_INDIVISIBLE_N);
  EXPECT_EQ(rl_dataset_generate("{not json", 1, nullptr, nullptr, &n), RL_ERR_INVALID_ARGUMENT);
}

// ---- CLI ----

TEST(Cli, SimulateIsDeterministic) {
  TempDir dir;
  const std::string common = "simulate --room 6x5x3 --alpha 0.3 --src 1.5,1.5,1.7 --mic 4.5,3.5,1.7 --seed 3 -o ";
  const auto a = run(common + dir.file("a.wav"));
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_NE(a.out.find("tau_d = 10.5 ms"), std::string::npos) << a.out;
  ASSERT_EQ(run(common + dir.file("b.wav")).exit_code, 0);
  EXPECT_EQ(slurp(dir.path() / "a.wav"), slurp(dir.path() / "b.wav"));
  EXPECT_TRUE(fs::exists(dir.path() / "a.json"));
}

TEST(Cli, SimulateErrors) {
  TempDir dir;
  EXPECT_EQ(run("simulate --room 6x5x3 --alpha 0.3 --src 1.5,1.5,1.7 -o " + dir.file("a.wav")).exit_code, 2);
  // A placement outside the room is an invalid configuration, not a failed draw.
  EXPECT_EQ(run("simulate --room 6x5x3 --alpha 0.3 --src 1.5,1.5,1.7 --mic 9,3,1.7 -o " + dir.file("a.wav")).exit_code, 2);
  EXPECT_EQ(run("simulate --target 20 --seed 1 -o " + dir.file("a.wav")).exit_code, 4);
  EXPECT_EQ(run("simulate --target 3 -o " + dir.file("a.wav")).exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
}

TEST(Cli, DecomposeAndMetrics) {
  TempDir dir;
  ASSERT_EQ(run("simulate --target 5 --seed 2 -o " + dir.file("h.wav")).exit_code, 0);
  const auto d = run("decompose " + dir.file("h.wav") + " -o " + dir.file("v") + " --echo-csv " + dir.file("eta.csv"));
  ASSERT_EQ(d.exit_code, 0);
  EXPECT_NE(d.out.find("tau_d = "), std::string::npos);
  EXPECT_NE(d.out.find(" ms, t_d = "), std::string::npos);
  EXPECT_NE(d.out.find(" ms, t_mix = "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir.path() / "v" / "h.noearly.wav"));
  EXPECT_TRUE(fs::exists(dir.path() / "eta.csv"));
  const auto m = run("metrics " + dir.file("h.wav") + " --json " + dir.file("m.json"));
  ASSERT_EQ(m.exit_code, 0);
  EXPECT_NE(m.out.find("DRR = "), std::string::npos);
  EXPECT_NE(m.out.find("T60 (Sabine) = "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir.path() / "m.json"));

  {
    std::ofstream bad(dir.file("bad.wav"), std::ios::binary);
    bad << "RIFFjunk";
  }
  EXPECT_EQ(run("decompose " + dir.file("bad.wav") + " -o " + dir.file("w")).exit_code, 2);
  EXPECT_EQ(run("decompose " + dir.file("h.wav") + " -o " + dir.file("w") + " --t-mix 0.001").exit_code, 2);
}

TEST(Cli, DatasetBaselinesEval) {
  TempDir dir;
  const std::string out = dir.file("ds");
  EXPECT_EQ(run("dataset -n 24 --seed 1 -q -o " + out).exit_code, 2);
  EXPECT_EQ(run("dataset -n 5 -q -o " + out).exit_code, 2);
  EXPECT_EQ(run("dataset --set n_records=5 --seed 1 -q -o " + out).exit_code, 2);
  const auto g = run("dataset -n 5 --seed 1 --set duration_s=1 --threads 2 -q -o " + out);
  ASSERT_EQ(g.exit_code, 0);
  std::size_t wavs = 0;
  for (const auto& p : fs::recursive_directory_iterator(out)) wavs += p.path().extension() == ".wav";
  EXPECT_EQ(wavs, 80u);

  const std::string manifest = out + "/manifest.json";
  ASSERT_EQ(run("baselines -m " + manifest + " -o " + dir.file("preds.csv")).exit_code, 0);
  const auto preds = slurp(dir.path() / "preds.csv");
  EXPECT_EQ(preds.substr(0, preds.find('\n')), "sample_id,scenario,variant,method,r_true,r_hat");
  EXPECT_EQ(std::count(preds.begin(), preds.end(), '\n'), 1 + 5 * 16 * 2);

  ASSERT_EQ(run("eval -m " + manifest + " -p " + dir.file("preds.csv") + " --seed 4 -o " + dir.file("e1")).exit_code, 0);
  ASSERT_EQ(run("eval -m " + manifest + " --builtin-baselines --seed 4 -o " + dir.file("e2")).exit_code, 0);
  const auto m1 = slurp(dir.path() / "e1" / "results_matrix.csv");
  EXPECT_EQ(m1, slurp(dir.path() / "e2" / "results_matrix.csv"));
  EXPECT_EQ(std::count(m1.begin(), m1.end(), '\n'), 1 + 32);
  for (const char* f : {"ribbon_distance.csv", "ribbon_drr.csv", "ribbon_c50.csv", "ribbon_t60.csv"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "e1" / f)) << f;
  }

  {
    std::ofstream p(dir.file("unknown.csv"));
    p << "sample_id,scenario,variant,method,r_hat\nzzz,uncalibrated,full,x,3.0\n";
  }
  EXPECT_EQ(run("eval -m " + manifest + " -p " + dir.file("unknown.csv") + " -o " + dir.file("e3")).exit_code, 3);
}

}  // namespace
