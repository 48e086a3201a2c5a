#ifndef RIRLAB_RIRLAB_H_
#define RIRLAB_RIRLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RL_API __declspec(dllexport)
#else
#define RL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
  RL_OK = 0,
  RL_ERR_INVALID_ARGUMENT = 1,
  RL_ERR_GEOMETRY_INFEASIBLE = 2,
  RL_ERR_DEGENERATE_ROOM = 3,
  RL_ERR_WINDOW_TOO_SHORT = 4,
  RL_ERR_BOUNDARY_ORDER = 5,
  RL_ERR_SAMPLE_RATE_MISMATCH = 6,
  RL_ERR_EMPTY_RIR = 7,
  RL_ERR_INSUFFICIENT_DECAY = 8,
  RL_ERR_DELAY_EXCEEDS_SIGNAL = 9,
  RL_ERR_CORPUS_UNAVAILABLE = 10,
  RL_ERR_INDIVISIBLE_N = 11,
  RL_ERR_SILENT_SIGNAL = 12,
  RL_ERR_LENGTH_MISMATCH = 13,
  RL_ERR_NON_POSITIVE_TRUTH = 14,
  RL_ERR_TOO_FEW_SAMPLES = 15,
  RL_ERR_ZERO_VARIANCE = 16,
  RL_ERR_UNKNOWN_SAMPLE_ID = 17,
  RL_ERR_IO = 18,
  RL_ERR_FORMAT = 19,
  RL_ERR_INTERNAL = 100,
} rl_status;

// Message of the last failed call on the calling thread ("" if none).
RL_API const char* rl_last_error(void);
RL_API const char* rl_status_name(rl_status status);
RL_API const char* rl_version(void);

// Surfaces in order: x = 0, x = width, y = 0, y = length, floor, ceiling.
typedef struct rl_room {
  double width;
  double length;
  double height;
  double absorption[6];
} rl_room;

typedef struct rl_pair {
  double source[3];
  double mic[3];
} rl_pair;

typedef struct rl_sim_config {
  double sample_rate;
  double speed_of_sound;
  int max_image_order;  // 0 selects the order from the room's T60
  int frac_delay_taps;
  uint64_t seed;
} rl_sim_config;

RL_API void rl_sim_config_default(rl_sim_config* cfg);

// Draws a room and placement with |r - target| <= tol from the built-in
// material table, using the generator stream keyed by (seed, sample_id).
RL_API rl_status rl_sample_configuration(uint64_t seed, uint64_t sample_id, double target,
                                         double tol, rl_room* room, rl_pair* pair);
RL_API rl_status rl_validate_geometry(const rl_room* room, const rl_pair* pair);
RL_API rl_status rl_sabine_t60(const rl_room* room, double* t60);

typedef struct rl_rir rl_rir;

RL_API rl_status rl_simulate(const rl_room* room, const rl_pair* pair, const rl_sim_config* cfg,
                             rl_rir** out);
// tau_d < 0 stands for "unknown" and uses the peak sample instead.
RL_API rl_status rl_rir_from_samples(const double* samples, size_t n, double sample_rate,
                                     double tau_d, rl_rir** out);
// Reads a WAV file and, when present, the sidecar JSON next to it
// (same stem, .json extension).
RL_API rl_status rl_rir_load(const char* wav_path, rl_rir** out);
// Writes a float32 WAV plus its sidecar JSON.
RL_API rl_status rl_rir_save(const rl_rir* rir, const char* wav_path);
RL_API void rl_rir_free(rl_rir* rir);

RL_API size_t rl_rir_length(const rl_rir* rir);
RL_API double rl_rir_sample_rate(const rl_rir* rir);
RL_API double rl_rir_tau_d(const rl_rir* rir);
// Borrowed pointer, valid until the handle is freed.
RL_API const double* rl_rir_samples(const rl_rir* rir);

// Frame count is written to *n_frames; times/eta may be NULL to query it.
RL_API rl_status rl_echo_density(const rl_rir* rir, double window, double hop, double* times,
                                 double* eta, size_t capacity, size_t* n_frames);
RL_API rl_status rl_echo_density_csv(const rl_rir* rir, double window, double hop,
                                     const char* csv_path);
// Searches from the first boundary decomposition accepts.
RL_API rl_status rl_mixing_time(const rl_rir* rir, double threshold, double* t_mix,
                                int* found);

typedef enum rl_variant {
  RL_VARIANT_FULL = 0,
  RL_VARIANT_DIRECT = 1,
  RL_VARIANT_NO_LATE = 2,
  RL_VARIANT_NO_EARLY = 3,
} rl_variant;

typedef struct rl_boundaries {
  double tau_d;
  double t_d;
  double t_mix;
  double guard;
  double fade;
} rl_boundaries;

typedef struct rl_variants rl_variants;

// t_mix <= 0 detects the mixing time from the echo density.
RL_API rl_status rl_decompose(const rl_rir* rir, double t_mix, double guard, double fade,
                              rl_variants** out);
// Borrowed handle, valid until the variant set is freed.
RL_API rl_status rl_variants_get(const rl_variants* set, rl_variant which, const rl_rir** out);
RL_API rl_status rl_variants_boundaries(const rl_variants* set, rl_boundaries* out);
// Writes <stem>.<variant>.wav for each variant and <stem>.boundaries.json.
RL_API rl_status rl_variants_save(const rl_variants* set, const char* out_dir, const char* stem);
RL_API void rl_variants_free(rl_variants* set);

typedef struct rl_metrics {
  double drr_db;
  int drr_unbounded;
  double c50_db;
  int c50_unbounded;
  double t60_schroeder;
  int has_t60_schroeder;
  double t60_sabine;  // from the room when the RIR carries one
  int has_t60_sabine;
} rl_metrics;

RL_API rl_status rl_metrics_compute(const rl_rir* rir, double guard, rl_metrics* out);
// JSON object with the same fields.
RL_API rl_status rl_metrics_json(const rl_rir* rir, double guard, const char* json_path);

RL_API rl_status rl_onset_estimate(const double* signal, size_t n, double sample_rate,
                                   double speed_of_sound, double rel_threshold, double* r_hat);

typedef void (*rl_progress_fn)(int done, int total, void* user);

// Builds a dataset from a JSON config (see README). Writes waveforms,
// records/, manifest.json and metrics.csv under the config's out_dir.
RL_API rl_status rl_dataset_generate(const char* config_json, int threads,
                                     rl_progress_fn progress, void* user, size_t* n_records);

// Runs the onset-delay and prior-median baselines on every stored waveform
// and writes a predictions CSV.
RL_API rl_status rl_baselines(const char* manifest_path, const char* predictions_csv);

// Evaluates a predictions CSV against the manifest and writes
// results_matrix.{csv,json} and ribbon_<covariate>.csv into out_dir.
RL_API rl_status rl_eval(const char* manifest_path, const char* predictions_csv, uint64_t seed,
                         int bootstrap_rounds, int ribbon_bins, const char* out_dir);

// STFT feature table of a WAV file as CSV.
RL_API rl_status rl_export_features(const char* wav_path, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif  // RIRLAB_RIRLAB_H_
