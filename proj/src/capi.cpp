#include "rirlab/rirlab.h"

#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "acoustics.hpp"
#include "dataset.hpp"
#include "echo_density.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "eval.hpp"
#include "rir_ops.hpp"
#include "room_sim.hpp"
#include "serialize.hpp"
#include "wav.hpp"

struct rl_rir {
  rirlab::Rir rir;
  std::optional<rirlab::RoomSpec> room;
  std::optional<rirlab::SourceReceiverPair> pair;
  rirlab::SimConfig config;
};

struct rl_variants {
  rirlab::RirVariantSet set;
  rl_rir handles[4];
};

namespace {

namespace fs = std::filesystem;
using rirlab::ErrorCode;

thread_local std::string g_last_error;

rl_status set_error(rl_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
rl_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RL_OK;
  } catch (const rirlab::Error& e) {
    return set_error(static_cast<rl_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(RL_ERR_FORMAT, e.what());
  } catch (const fs::filesystem_error& e) {
    return set_error(RL_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(RL_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) rirlab::fail(ErrorCode::kInvalidArgument, what);
}

rirlab::RoomSpec to_room(const rl_room& r) {
  rirlab::RoomSpec room;
  room.width = r.width;
  room.length = r.length;
  room.height = r.height;
  for (int s = 0; s < rirlab::kNumSurfaces; ++s) room.absorption[s] = r.absorption[s];
  return room;
}

void from_room(const rirlab::RoomSpec& room, rl_room* out) {
  out->width = room.width;
  out->length = room.length;
  out->height = room.height;
  for (int s = 0; s < rirlab::kNumSurfaces; ++s) out->absorption[s] = room.absorption[s];
}

rirlab::SourceReceiverPair to_pair(const rl_pair& p) {
  return rirlab::SourceReceiverPair::make({p.source[0], p.source[1], p.source[2]},
                                          {p.mic[0], p.mic[1], p.mic[2]});
}

void from_pair(const rirlab::SourceReceiverPair& pair, rl_pair* out) {
  out->source[0] = pair.source.x;
  out->source[1] = pair.source.y;
  out->source[2] = pair.source.z;
  out->mic[0] = pair.mic.x;
  out->mic[1] = pair.mic.y;
  out->mic[2] = pair.mic.z;
}

rirlab::SimConfig to_config(const rl_sim_config& c) {
  rirlab::SimConfig cfg;
  cfg.sample_rate = c.sample_rate;
  cfg.speed_of_sound = c.speed_of_sound;
  cfg.max_image_order = c.max_image_order;
  cfg.frac_delay_taps = c.frac_delay_taps;
  cfg.seed = c.seed;
  return cfg;
}

fs::path sidecar_path(const std::string& wav_path) {
  return fs::path(wav_path).replace_extension(".json");
}

void save_rir(const rl_rir& h, const fs::path& wav_path) {
  rirlab::write_wav(wav_path.string(), h.rir.samples, h.rir.sample_rate,
                    rirlab::SampleFormat::kFloat32);
  rirlab::RirSidecar side;
  side.room = h.room;
  side.pair = h.pair;
  side.tau_d = h.rir.tau_d;
  side.seed = h.config.seed;
  side.config = h.config;
  rirlab::write_text_file(sidecar_path(wav_path.string()).string(),
                          rirlab::sidecar_json(side).dump(2) + "\n");
}

rirlab::AcousticMetrics metrics_of(const rl_rir& h, double guard) {
  return rirlab::compute_metrics(h.rir, guard, h.room ? &*h.room : nullptr);
}

}  // namespace

extern "C" {

const char* rl_last_error(void) { return g_last_error.c_str(); }

const char* rl_status_name(rl_status status) {
  if (status == RL_OK) return "OK";
  if (status == RL_ERR_INTERNAL) return "Internal";
  if (status < RL_ERR_INVALID_ARGUMENT || status > RL_ERR_FORMAT) return "Unknown";
  return rirlab::error_code_name(static_cast<ErrorCode>(status));
}

const char* rl_version(void) { return "0.1.0"; }

void rl_sim_config_default(rl_sim_config* cfg) {
  if (!cfg) return;
  const rirlab::SimConfig d;
  cfg->sample_rate = d.sample_rate;
  cfg->speed_of_sound = d.speed_of_sound;
  cfg->max_image_order = d.max_image_order;
  cfg->frac_delay_taps = d.frac_delay_taps;
  cfg->seed = d.seed;
}

rl_status rl_sample_configuration(uint64_t seed, uint64_t sample_id, double target, double tol,
                                  rl_room* room, rl_pair* pair) {
  return guarded([&] {
    require(room && pair, "null output");
    auto rng = rirlab::make_rng(seed, sample_id, "config#0");
    const auto [r, p] = rirlab::sample_configuration(rng, target, tol);
    from_room(r, room);
    from_pair(p, pair);
  });
}

rl_status rl_validate_geometry(const rl_room* room, const rl_pair* pair) {
  return guarded([&] {
    require(room && pair, "null input");
    const auto r = to_room(*room);
    rirlab::validate_room(r);
    rirlab::validate_pair(r, to_pair(*pair));
  });
}

rl_status rl_sabine_t60(const rl_room* room, double* t60) {
  return guarded([&] {
    require(room && t60, "null argument");
    *t60 = rirlab::sabine_t60(to_room(*room));
  });
}

rl_status rl_simulate(const rl_room* room, const rl_pair* pair, const rl_sim_config* cfg,
                      rl_rir** out) {
  return guarded([&] {
    require(room && pair && out, "null argument");
    rl_sim_config c;
    rl_sim_config_default(&c);
    if (cfg) c = *cfg;
    auto h = std::make_unique<rl_rir>();
    h->room = to_room(*room);
    h->pair = to_pair(*pair);
    h->config = to_config(c);
    rirlab::validate_room(*h->room);
    rirlab::validate_pair(*h->room, *h->pair);
    if (h->config.max_image_order <= 0) {
      h->config.max_image_order =
          rirlab::default_image_order(*h->room, *h->pair, h->config.speed_of_sound);
    }
    h->rir = rirlab::simulate_rir(*h->room, *h->pair, h->config);
    *out = h.release();
  });
}

rl_status rl_rir_from_samples(const double* samples, size_t n, double sample_rate, double tau_d,
                              rl_rir** out) {
  return guarded([&] {
    require(out && (samples || n == 0), "null argument");
    require(sample_rate > 0.0, "sample rate must be positive");
    if (n == 0) rirlab::fail(rirlab::ErrorCode::kEmptyRir, "RIR has no samples");
    auto h = std::make_unique<rl_rir>();
    h->rir.samples.assign(samples, samples + n);
    h->rir.sample_rate = sample_rate;
    h->rir.tau_d = tau_d >= 0.0 ? tau_d : rirlab::peak_time(h->rir.samples, sample_rate);
    h->config.sample_rate = sample_rate;
    *out = h.release();
  });
}

rl_status rl_rir_load(const char* wav_path, rl_rir** out) {
  return guarded([&] {
    require(wav_path && out, "null argument");
    auto wav = rirlab::read_wav(wav_path);
    auto h = std::make_unique<rl_rir>();
    h->rir.samples = std::move(wav.samples);
    h->rir.sample_rate = wav.sample_rate;
    h->config.sample_rate = wav.sample_rate;
    const auto side_path = sidecar_path(wav_path);
    if (fs::exists(side_path)) {
      const auto side = rirlab::sidecar_from_json(
          nlohmann::json::parse(rirlab::read_text_file(side_path.string())));
      h->rir.tau_d = side.tau_d;
      h->room = side.room;
      h->pair = side.pair;
      h->config = side.config;
      if (std::abs(h->config.sample_rate - wav.sample_rate) > 1e-9) {
        rirlab::fail(ErrorCode::kSampleRateMismatch, "sidecar and WAV sample rates differ");
      }
    } else {
      h->rir.tau_d = rirlab::peak_time(h->rir.samples, wav.sample_rate);
    }
    *out = h.release();
  });
}

rl_status rl_rir_save(const rl_rir* rir, const char* wav_path) {
  return guarded([&] {
    require(rir && wav_path, "null argument");
    save_rir(*rir, wav_path);
  });
}

void rl_rir_free(rl_rir* rir) { delete rir; }

size_t rl_rir_length(const rl_rir* rir) { return rir ? rir->rir.size() : 0; }
double rl_rir_sample_rate(const rl_rir* rir) { return rir ? rir->rir.sample_rate : 0.0; }
double rl_rir_tau_d(const rl_rir* rir) { return rir ? rir->rir.tau_d : 0.0; }
const double* rl_rir_samples(const rl_rir* rir) {
  return rir ? rir->rir.samples.data() : nullptr;
}

rl_status rl_echo_density(const rl_rir* rir, double window, double hop, double* times,
                          double* eta, size_t capacity, size_t* n_frames) {
  return guarded([&] {
    require(rir && n_frames, "null argument");
    const auto p = rirlab::echo_density(rir->rir, window, hop);
    *n_frames = p.eta.size();
    if (!times && !eta) return;
    require(capacity >= p.eta.size(), "output buffers too small");
    for (std::size_t i = 0; i < p.eta.size(); ++i) {
      if (times) times[i] = p.times[i];
      if (eta) eta[i] = p.eta[i];
    }
  });
}

rl_status rl_echo_density_csv(const rl_rir* rir, double window, double hop,
                              const char* csv_path) {
  return guarded([&] {
    require(rir && csv_path, "null argument");
    rirlab::write_text_file(csv_path,
                            rirlab::profile_to_csv(rirlab::echo_density(rir->rir, window, hop)));
  });
}

rl_status rl_mixing_time(const rl_rir* rir, double threshold, double* t_mix, int* found) {
  return guarded([&] {
    require(rir && t_mix && found, "null argument");
    const auto mt = rirlab::detect_mixing_time(rir->rir, rirlab::kDefaultGuard,
                                               rirlab::kDefaultFade, threshold);
    *t_mix = mt.t_mix;
    *found = mt.found ? 1 : 0;
  });
}

rl_status rl_decompose(const rl_rir* rir, double t_mix, double guard, double fade,
                       rl_variants** out) {
  return guarded([&] {
    require(rir && out, "null argument");
    if (t_mix <= 0.0) {
      const auto mt = rirlab::detect_mixing_time(rir->rir, guard, fade);
      if (!mt.found) {
        rirlab::fail(ErrorCode::kBoundaryOrderViolation,
                     "no mixing time detected after the direct-path boundary");
      }
      t_mix = mt.t_mix;
    }
    auto v = std::make_unique<rl_variants>();
    v->set = rirlab::decompose(rir->rir, t_mix, guard, fade);
    for (auto which : rirlab::kAllVariants) {
      auto& h = v->handles[static_cast<int>(which)];
      h.rir = v->set.get(which);
      h.room = rir->room;
      h.pair = rir->pair;
      h.config = rir->config;
    }
    *out = v.release();
  });
}

rl_status rl_variants_get(const rl_variants* set, rl_variant which, const rl_rir** out) {
  return guarded([&] {
    require(set && out, "null argument");
    require(which >= RL_VARIANT_FULL && which <= RL_VARIANT_NO_EARLY, "unknown variant");
    *out = &set->handles[which];
  });
}

rl_status rl_variants_boundaries(const rl_variants* set, rl_boundaries* out) {
  return guarded([&] {
    require(set && out, "null argument");
    const auto& b = set->set.boundaries;
    *out = {b.tau_d, b.t_d, b.t_mix, b.guard, b.fade};
  });
}

rl_status rl_variants_save(const rl_variants* set, const char* out_dir, const char* stem) {
  return guarded([&] {
    require(set && out_dir && stem, "null argument");
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    for (auto which : rirlab::kAllVariants) {
      const auto name = std::string(stem) + "." + std::string(rirlab::variant_name(which)) + ".wav";
      save_rir(set->handles[static_cast<int>(which)], dir / name);
    }
    const nlohmann::json b = set->set.boundaries;
    rirlab::write_text_file((dir / (std::string(stem) + ".boundaries.json")).string(),
                            b.dump(2) + "\n");
  });
}

void rl_variants_free(rl_variants* set) { delete set; }

rl_status rl_metrics_compute(const rl_rir* rir, double guard, rl_metrics* out) {
  return guarded([&] {
    require(rir && out, "null argument");
    const auto m = metrics_of(*rir, guard);
    *out = {};
    out->drr_db = m.drr.db;
    out->drr_unbounded = m.drr.unbounded;
    out->c50_db = m.c50.db;
    out->c50_unbounded = m.c50.unbounded;
    out->has_t60_schroeder = m.t60_schroeder.has_value();
    out->t60_schroeder = m.t60_schroeder.value_or(0.0);
    out->has_t60_sabine = m.t60_sabine.has_value();
    out->t60_sabine = m.t60_sabine.value_or(0.0);
  });
}

rl_status rl_metrics_json(const rl_rir* rir, double guard, const char* json_path) {
  return guarded([&] {
    require(rir && json_path, "null argument");
    const auto m = metrics_of(*rir, guard);
    auto opt = [](const std::optional<double>& v) {
      return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    const nlohmann::json j{{"tau_d_s", rir->rir.tau_d},
                           {"drr_db", rirlab::decibels_json(m.drr)},
                           {"c50_db", rirlab::decibels_json(m.c50)},
                           {"t60_schroeder_s", opt(m.t60_schroeder)},
                           {"t60_sabine_s", opt(m.t60_sabine)}};
    rirlab::write_text_file(json_path, j.dump(2) + "\n");
  });
}

rl_status rl_onset_estimate(const double* signal, size_t n, double sample_rate,
                            double speed_of_sound, double rel_threshold, double* r_hat) {
  return guarded([&] {
    require(signal && r_hat, "null argument");
    *r_hat = rirlab::onset_delay_estimate({signal, n}, sample_rate, speed_of_sound,
                                          rel_threshold)
                 .r_hat;
  });
}

rl_status rl_dataset_generate(const char* config_json, int threads, rl_progress_fn progress,
                              void* user, size_t* n_records) {
  return guarded([&] {
    require(config_json != nullptr, "null config");
    rirlab::DatasetGenerator gen(rirlab::config_from_json(config_json));
    std::function<void(int, int)> cb;
    if (progress) cb = [&](int done, int total) { progress(done, total, user); };
    const auto m = gen.run(threads, cb);
    if (n_records) *n_records = m.records.size();
  });
}

rl_status rl_baselines(const char* manifest_path, const char* predictions_csv) {
  return guarded([&] {
    require(manifest_path && predictions_csv, "null argument");
    const auto m = rirlab::read_manifest(manifest_path);
    const auto dir = fs::path(manifest_path).parent_path();
    const auto rows = rirlab::builtin_baselines(m, dir.empty() ? "." : dir.string());
    rirlab::write_text_file(predictions_csv, rirlab::predictions_to_csv(rows));
  });
}

rl_status rl_eval(const char* manifest_path, const char* predictions_csv, uint64_t seed,
                  int bootstrap_rounds, int ribbon_bins, const char* out_dir) {
  return guarded([&] {
    require(manifest_path && predictions_csv && out_dir, "null argument");
    const auto m = rirlab::read_manifest(manifest_path);
    rirlab::EvalOptions opt;
    opt.seed = seed;
    opt.bootstrap_rounds = bootstrap_rounds;
    opt.ribbon_bins = ribbon_bins;
    const auto report =
        rirlab::build_matrix(rirlab::read_predictions_csv(predictions_csv), m, opt);
    rirlab::write_report(report, out_dir);
  });
}

rl_status rl_export_features(const char* wav_path, const char* csv_path) {
  return guarded([&] {
    require(wav_path && csv_path, "null argument");
    const auto wav = rirlab::read_wav(wav_path);
    rirlab::write_text_file(csv_path,
                            rirlab::export_features(wav.samples, wav.sample_rate).to_csv());
  });
}

}  // extern "C"
