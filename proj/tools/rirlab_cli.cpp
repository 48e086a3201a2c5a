// Command-line front end. Talks to the library only through rirlab.h.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rirlab/rirlab.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitGeometry = 4 };

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{kExitUsage, msg}; }

int exit_code_for(rl_status s) {
  switch (s) {
    case RL_OK:
      return kExitOk;
    case RL_ERR_INVALID_ARGUMENT:
    case RL_ERR_INDIVISIBLE_N:
    case RL_ERR_FORMAT:
    case RL_ERR_BOUNDARY_ORDER:
    case RL_ERR_WINDOW_TOO_SHORT:
      return kExitUsage;
    case RL_ERR_GEOMETRY_INFEASIBLE:
    case RL_ERR_DEGENERATE_ROOM:
      return kExitGeometry;
    default:
      return kExitData;
  }
}

void check(rl_status s) {
  if (s != RL_OK) {
    throw CliError{exit_code_for(s),
                   std::string(rl_status_name(s)) + ": " + rl_last_error()};
  }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  const char sep = text.find('x') != std::string::npos ? 'x' : ',';
  while (std::getline(in, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage_error(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  return out;
}

void fill3(double dst[3], const std::string& text, const char* what) {
  const auto v = parse_list(text, what);
  if (v.size() != 3) usage_error(std::string(what) + " needs three values");
  for (int i = 0; i < 3; ++i) dst[i] = v[i];
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("RIRLAB_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != std::strlen(s)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    usage_error("RIRLAB_SEED is not an unsigned integer");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitData, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_boundaries(const rl_boundaries& b) {
  std::printf("tau_d = %.1f ms, t_d = %.1f ms, t_mix = %.1f ms\n", b.tau_d * 1e3, b.t_d * 1e3,
              b.t_mix * 1e3);
}

void print_metrics(const rl_metrics& m) {
  if (m.drr_unbounded) {
    std::printf("DRR = +inf dB\n");
  } else {
    std::printf("DRR = %.2f dB\n", m.drr_db);
  }
  if (m.c50_unbounded) {
    std::printf("C50 = +inf dB\n");
  } else {
    std::printf("C50 = %.2f dB\n", m.c50_db);
  }
  if (m.has_t60_schroeder) {
    std::printf("T60 (Schroeder) = %.3f s\n", m.t60_schroeder);
  } else {
    std::printf("T60 (Schroeder) = n/a\n");
  }
  if (m.has_t60_sabine) std::printf("T60 (Sabine) = %.3f s\n", m.t60_sabine);
}

struct SimulateArgs {
  std::string room, alpha, src, mic, config, out;
  std::optional<double> target;
  std::optional<std::uint64_t> seed;
  double fs = 16000.0;
  double c = 343.0;
  int order = 0;
};

void run_simulate(const SimulateArgs& a) {
  rl_room room{};
  rl_pair pair{};
  rl_sim_config cfg;
  rl_sim_config_default(&cfg);
  cfg.sample_rate = a.fs;
  cfg.speed_of_sound = a.c;
  cfg.max_image_order = a.order;
  const auto seed = a.seed ? a.seed : env_seed();
  cfg.seed = seed.value_or(0);

  if (!a.config.empty()) {
    json j;
    try {
      j = json::parse(read_file(a.config));
      const auto& r = j.at("room");
      room.width = r.at("width").get<double>();
      room.length = r.at("length").get<double>();
      room.height = r.at("height").get<double>();
      const auto& ab = r.at("absorption");
      for (int s = 0; s < 6; ++s) {
        room.absorption[s] = ab.is_array() ? ab.at(s).get<double>() : ab.get<double>();
      }
      const auto& p = j.at("pair");
      for (int i = 0; i < 3; ++i) {
        pair.source[i] = p.at("source").at(i).get<double>();
        pair.mic[i] = p.at("mic").at(i).get<double>();
      }
      if (j.contains("config")) {
        const auto& c = j.at("config");
        cfg.sample_rate = c.value("sample_rate", cfg.sample_rate);
        cfg.speed_of_sound = c.value("speed_of_sound", cfg.speed_of_sound);
        cfg.max_image_order = c.value("max_image_order", cfg.max_image_order);
        cfg.frac_delay_taps = c.value("frac_delay_taps", cfg.frac_delay_taps);
      }
    } catch (const json::exception& e) {
      usage_error(std::string("config: ") + e.what());
    }
  } else if (a.target) {
    if (!seed) usage_error("--target needs --seed or RIRLAB_SEED");
    check(rl_sample_configuration(*seed, 0, *a.target, 0.01, &room, &pair));
  } else {
    if (a.room.empty() || a.alpha.empty() || a.src.empty() || a.mic.empty()) {
      usage_error("simulate needs --room, --alpha, --src and --mic (or --config / --target)");
    }
    double dims[3];
    fill3(dims, a.room, "--room");
    room.width = dims[0];
    room.length = dims[1];
    room.height = dims[2];
    const auto alpha = parse_list(a.alpha, "--alpha");
    if (alpha.size() == 1) {
      for (double& v : room.absorption) v = alpha[0];
    } else if (alpha.size() == 6) {
      for (int s = 0; s < 6; ++s) room.absorption[s] = alpha[s];
    } else {
      usage_error("--alpha takes one value or six");
    }
    fill3(pair.source, a.src, "--src");
    fill3(pair.mic, a.mic, "--mic");
  }

  rl_rir* rir = nullptr;
  check(rl_simulate(&room, &pair, &cfg, &rir));
  const rl_status s = rl_rir_save(rir, a.out.c_str());
  const double tau = rl_rir_tau_d(rir);
  const size_t len = rl_rir_length(rir);
  rl_rir_free(rir);
  check(s);
  std::printf("wrote %s (%zu samples, tau_d = %.1f ms)\n", a.out.c_str(), len, tau * 1e3);
}

struct DecomposeArgs {
  std::string input, out_dir, echo_csv;
  double t_mix = 0.0;
  double guard = 0.002;
  double fade = 0.005;
};

void run_decompose(const DecomposeArgs& a) {
  rl_rir* rir = nullptr;
  check(rl_rir_load(a.input.c_str(), &rir));
  rl_variants* set = nullptr;
  rl_status s = rl_decompose(rir, a.t_mix, a.guard, a.fade, &set);
  if (s == RL_OK && !a.echo_csv.empty()) {
    s = rl_echo_density_csv(rir, 0.020, 0.002, a.echo_csv.c_str());
  }
  rl_rir_free(rir);
  check(s);
  rl_boundaries b{};
  const std::string stem = fs::path(a.input).stem().string();
  s = rl_variants_boundaries(set, &b);
  if (s == RL_OK) s = rl_variants_save(set, a.out_dir.c_str(), stem.c_str());
  rl_variants_free(set);
  check(s);
  print_boundaries(b);
}

struct MetricsArgs {
  std::string input, json_out;
  double guard = 0.002;
};

void run_metrics(const MetricsArgs& a) {
  rl_rir* rir = nullptr;
  check(rl_rir_load(a.input.c_str(), &rir));
  rl_metrics m{};
  rl_status s = rl_metrics_compute(rir, a.guard, &m);
  if (s == RL_OK && !a.json_out.empty()) s = rl_metrics_json(rir, a.guard, a.json_out.c_str());
  rl_rir_free(rir);
  check(s);
  print_metrics(m);
}

struct DatasetArgs {
  std::string config, out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  int threads = 0;
  bool quiet = false;
};

json parse_override_value(const std::string& v) {
  try {
    return json::parse(v);
  } catch (const json::exception&) {
    return v;
  }
}

void run_dataset(const DatasetArgs& a) {
  json cfg = json::object();
  if (!a.config.empty()) {
    try {
      cfg = json::parse(read_file(a.config));
    } catch (const json::exception& e) {
      usage_error(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) usage_error("config must be a JSON object");
  }
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) usage_error("override '" + kv + "' is not key=value");
    cfg[kv.substr(0, eq)] = parse_override_value(kv.substr(eq + 1));
  }
  if (a.n) cfg["n"] = *a.n;
  if (!a.out.empty()) cfg["out_dir"] = a.out;
  if (a.seed) {
    cfg["seed"] = *a.seed;
  } else if (!cfg.contains("seed")) {
    const auto s = env_seed();
    if (!s) usage_error("dataset needs a seed (config, --seed or RIRLAB_SEED)");
    cfg["seed"] = *s;
  }
  if (!cfg.contains("out_dir")) usage_error("dataset needs an output directory (--out)");

  const int threads = a.threads > 0
                          ? a.threads
                          : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  rl_progress_fn progress = nullptr;
  if (!a.quiet) {
    progress = [](int done, int total, void*) {
      if (done == total || done % 25 == 0) std::fprintf(stderr, "\r%d/%d records", done, total);
      if (done == total) std::fprintf(stderr, "\n");
    };
  }
  size_t n = 0;
  check(rl_dataset_generate(cfg.dump().c_str(), threads, progress, nullptr, &n));
  std::printf("wrote %zu records to %s\n", n, cfg["out_dir"].get<std::string>().c_str());
}

struct BaselinesArgs {
  std::string manifest, out, features_in, features_out;
};

void run_baselines(const BaselinesArgs& a) {
  if (!a.features_in.empty()) {
    if (a.features_out.empty()) usage_error("--features needs --features-out");
    check(rl_export_features(a.features_in.c_str(), a.features_out.c_str()));
  }
  if (!a.manifest.empty()) {
    if (a.out.empty()) usage_error("baselines needs --out");
    check(rl_baselines(a.manifest.c_str(), a.out.c_str()));
    std::printf("wrote %s\n", a.out.c_str());
  } else if (a.features_in.empty()) {
    usage_error("baselines needs --manifest or --features");
  }
}

struct EvalArgs {
  std::string manifest, predictions, out;
  bool builtin = false;
  std::optional<std::uint64_t> seed;
  int rounds = 2000;
  int bins = 10;
};

void run_eval(const EvalArgs& a) {
  if (a.builtin == !a.predictions.empty()) {
    usage_error("eval needs exactly one of --predictions and --builtin-baselines");
  }
  std::string preds = a.predictions;
  if (a.builtin) {
    fs::create_directories(a.out);
    preds = (fs::path(a.out) / "predictions.csv").string();
    check(rl_baselines(a.manifest.c_str(), preds.c_str()));
  }
  const auto seed = a.seed ? a.seed : env_seed();
  check(rl_eval(a.manifest.c_str(), preds.c_str(), seed.value_or(0), a.rounds, a.bins,
                a.out.c_str()));
  std::printf("wrote %s\n", (fs::path(a.out) / "results_matrix.csv").string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Room impulse response toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rl_version()));

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate a shoebox RIR (WAV + JSON sidecar)");
  c_sim->add_option("--room", sim.room, "Room size WxLxH in meters");
  c_sim->add_option("--alpha", sim.alpha, "Absorption: one value or six comma-separated");
  c_sim->add_option("--src", sim.src, "Source position x,y,z");
  c_sim->add_option("--mic", sim.mic, "Microphone position x,y,z");
  c_sim->add_option("--config", sim.config, "JSON with room, pair and config objects");
  c_sim->add_option("--target", sim.target, "Sample a configuration at this distance");
  c_sim->add_option("--seed", sim.seed, "Seed (falls back to RIRLAB_SEED)");
  c_sim->add_option("--fs", sim.fs, "Sample rate")->check(CLI::PositiveNumber);
  c_sim->add_option("--c", sim.c, "Speed of sound")->check(CLI::PositiveNumber);
  c_sim->add_option("--order", sim.order, "Max image order (0 = from T60)");
  c_sim->add_option("-o,--out", sim.out, "Output WAV path")->required();

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Split an RIR into four variants");
  c_dec->add_option("rir", dec.input, "RIR WAV (sidecar JSON optional)")->required();
  c_dec->add_option("-o,--out", dec.out_dir, "Output directory")->required();
  c_dec->add_option("--t-mix", dec.t_mix, "Mixing time in seconds (default: detect)");
  c_dec->add_option("--guard", dec.guard, "Direct-path guard in seconds");
  c_dec->add_option("--fade", dec.fade, "Fade length in seconds");
  c_dec->add_option("--echo-csv", dec.echo_csv, "Also write the echo density profile");

  MetricsArgs met;
  auto* c_met = app.add_subcommand("metrics", "DRR, C50 and T60 of an RIR");
  c_met->add_option("rir", met.input, "RIR WAV (sidecar JSON optional)")->required();
  c_met->add_option("--guard", met.guard, "Direct-path guard in seconds");
  c_met->add_option("--json", met.json_out, "Write metrics as JSON");

  DatasetArgs ds;
  auto* c_ds = app.add_subcommand("dataset", "Generate the scenario x variant dataset");
  c_ds->add_option("-c,--config", ds.config, "Dataset config JSON");
  c_ds->add_option("--set", ds.overrides, "Config override key=value (repeatable)");
  c_ds->add_option("-o,--out", ds.out, "Output directory");
  c_ds->add_option("--seed", ds.seed, "Seed (overrides the config)");
  c_ds->add_option("-n", ds.n, "Number of records");
  c_ds->add_option("--threads", ds.threads, "Worker threads (default: logical cores)");
  c_ds->add_flag("-q,--quiet", ds.quiet, "No progress output");

  BaselinesArgs bl;
  auto* c_bl = app.add_subcommand("baselines", "Run the analytic baselines on a dataset");
  c_bl->add_option("-m,--manifest", bl.manifest, "manifest.json of a dataset");
  c_bl->add_option("-o,--out", bl.out, "Predictions CSV");
  c_bl->add_option("--features", bl.features_in, "Export STFT features of this WAV");
  c_bl->add_option("--features-out", bl.features_out, "Feature CSV path");

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "Results matrix and ribbon tables");
  c_ev->add_option("-m,--manifest", ev.manifest, "manifest.json of a dataset")->required();
  c_ev->add_option("-p,--predictions", ev.predictions, "Predictions CSV");
  c_ev->add_flag("--builtin-baselines", ev.builtin, "Evaluate the built-in baselines");
  c_ev->add_option("-o,--out", ev.out, "Output directory")->required();
  c_ev->add_option("--seed", ev.seed, "Bootstrap seed (falls back to RIRLAB_SEED, then 0)");
  c_ev->add_option("--rounds", ev.rounds, "Bootstrap rounds")->check(CLI::PositiveNumber);
  c_ev->add_option("--bins", ev.bins, "Ribbon bins")->check(CLI::Range(2, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_sim) run_simulate(sim);
    if (*c_dec) run_decompose(dec);
    if (*c_met) run_metrics(met);
    if (*c_ds) run_dataset(ds);
    if (*c_bl) run_baselines(bl);
    if (*c_ev) run_eval(ev);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
