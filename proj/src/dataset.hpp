#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acoustics.hpp"
#include "eval.hpp"
#include "rir_ops.hpp"
#include "room_sim.hpp"
#include "scenario.hpp"
#include "speech.hpp"
#include "wav.hpp"

namespace rirlab {

struct DatasetConfig {
  int n = 2500;
  double duration_s = 10.0;
  double sample_rate = 16000.0;
  double r_min = 1.0;
  double r_max = 11.0;
  int folds = 5;
  std::uint64_t seed = 0;
  // Directory of WAV recordings; empty selects synthetic speech.
  std::string speech_source;
  bool synthetic_fallback = true;
  std::string out_dir;
  SampleFormat format = SampleFormat::kPcm16;
  double speed_of_sound = 343.0;
  double distance_tol = 0.01;
  std::string materials;  // JSON material table; empty = built-in
  bool write_rirs = false;

  void validate() const;
};

struct SpeechRef {
  std::string item;  // corpus item id, or "synthetic"
  std::string talker;
  std::size_t offset = 0;  // samples at the dataset rate
  std::uint64_t hash = 0;  // FNV-1a of the dry segment
};

struct WaveformFile {
  std::string path;    // relative to out_dir
  double scale = 1.0;  // decoded sample * scale = simulated amplitude
};

struct SampleRecord {
  std::string id;
  int index = 0;
  RoomSpec room;
  SourceReceiverPair pair;
  double r = 0.0;
  double target_r = 0.0;
  double tau_d = 0.0;
  double t_mix = 0.0;
  double t60_sabine = 0.0;
  std::optional<double> t60_schroeder;
  Decibels drr;
  Decibels c50;
  int image_order = 0;
  int fold = 0;
  SpeechRef speech;
  std::uint64_t rir_hash = 0;
  // Keyed by scenario name.
  std::map<std::string, DecalibrationDraw> draws;
  // Keyed by "<scenario>/<variant>".
  std::map<std::string, WaveformFile> files;

  friend bool operator==(const SampleRecord&, const SampleRecord&);
};

struct Manifest {
  int version = 1;
  std::uint64_t global_seed = 0;
  DatasetConfig config;
  bool talker_disjoint = true;
  std::vector<SampleRecord> records;

  const SampleRecord* find(const std::string& id) const;
  friend bool operator==(const Manifest&, const Manifest&);
};

std::string sample_id(int index);
std::string waveform_key(const ScenarioSpec& s, Variant v);

// Random permutation split into k equal blocks; labels[i] is the fold of
// item i. IndivisibleN when k does not divide n.
std::vector<int> assign_folds(int n, int k, Rng& rng);

// Everything produced for one record before it touches the disk.
struct RecordOutputs {
  SampleRecord record;
  std::vector<double> dry_speech;
  RirVariantSet variants;
  // [scenario index][variant index], clipped to the configured duration.
  std::array<std::array<std::vector<double>, 4>, 4> waveforms;
};

// Shared read-only state of a generation run.
class DatasetGenerator {
 public:
  explicit DatasetGenerator(DatasetConfig config);

  const DatasetConfig& config() const { return config_; }
  const std::vector<int>& folds() const { return folds_; }
  bool talker_disjoint() const { return talker_disjoint_; }

  // Deterministic in (config, index).
  RecordOutputs generate_record(int index) const;

  // Writes waveforms and the per-record sidecar; fills record.files.
  void write_record(RecordOutputs& out) const;
  // Loads a record written by a previous run when all its files exist.
  std::optional<SampleRecord> load_existing(int index) const;

  // Generates or resumes every record with `threads` workers, then writes
  // manifest.json and metrics.csv. Output bytes do not depend on threads.
  Manifest run(int threads, const std::function<void(int done, int total)>& progress = {});

 private:
  std::vector<double> dry_speech(int index, int fold, SpeechRef& ref) const;

  DatasetConfig config_;
  MaterialTable materials_;
  std::optional<SpeechCorpus> corpus_;
  std::vector<int> folds_;
  std::vector<std::vector<std::size_t>> items_by_fold_;
  bool talker_disjoint_ = true;
};

Manifest generate(const DatasetConfig& config, int threads = 1);

// JSON forms. Config parsing accepts a partial object over the defaults;
// out_dir is read but never written. read_manifest sets out_dir to the
// manifest's directory.
std::string config_to_json(const DatasetConfig& config);
DatasetConfig config_from_json(const std::string& text);
std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);
Manifest read_manifest(const std::string& path);

// sample_id, r, drr_db, c50_db, t60_sabine_s, t60_schroeder_s, t_mix_s;
// unbounded or missing values are empty cells.
std::string metrics_csv(const Manifest& manifest);

// Onset-delay on every stored waveform and the prior-median baseline fitted
// per CV rotation (test fold k, validation fold k+1, training on the rest).
// `dataset_dir` is the directory holding the manifest's waveform paths.
std::vector<PredictionRow> builtin_baselines(const Manifest& manifest,
                                            const std::string& dataset_dir);

}  // namespace rirlab
