#include "dataset.hpp"

#include <algorithm>
#include <atomic>
#include <complex>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "echo_density.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "fft.hpp"
#include "serialize.hpp"

namespace rirlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kConfigAttempts = 50;
constexpr int kOrderDeepenings = 2;
constexpr int kOrderStep = 20;
constexpr double kPcmHeadroom = 0.99;

std::uint64_t fnv1a(const void* data, std::size_t bytes,
                    std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_samples(const std::vector<double>& x) {
  return fnv1a(x.data(), x.size() * sizeof(double));
}

const char* format_name(SampleFormat f) {
  return f == SampleFormat::kPcm16 ? "pcm16" : "float32";
}

SampleFormat format_from_name(const std::string& s) {
  if (s == "pcm16") return SampleFormat::kPcm16;
  if (s == "float32") return SampleFormat::kFloat32;
  fail(ErrorCode::kInvalidArgument, "unknown sample format '" + s + "'");
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// The output location is not part of the serialised config, so a dataset
// can be moved without invalidating its records.
json config_json(const DatasetConfig& c) {
  return json{{"n", c.n},
              {"duration_s", c.duration_s},
              {"sample_rate", c.sample_rate},
              {"r_min", c.r_min},
              {"r_max", c.r_max},
              {"folds", c.folds},
              {"seed", c.seed},
              {"speech_source", c.speech_source},
              {"synthetic_fallback", c.synthetic_fallback},
              {"format", format_name(c.format)},
              {"speed_of_sound", c.speed_of_sound},
              {"distance_tol", c.distance_tol},
              {"materials", c.materials},
              {"write_rirs", c.write_rirs}};
}

DatasetConfig config_from(const json& j) {
  DatasetConfig c;
  static const std::set<std::string> known{
      "n",          "duration_s", "sample_rate",    "r_min",        "r_max",
      "folds",      "seed",       "speech_source",  "synthetic_fallback", "out_dir",
      "format",     "speed_of_sound", "distance_tol", "materials",  "write_rirs"};
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "dataset config must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) fail(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  }
  try {
    c.n = j.value("n", c.n);
    c.duration_s = j.value("duration_s", c.duration_s);
    c.sample_rate = j.value("sample_rate", c.sample_rate);
    c.r_min = j.value("r_min", c.r_min);
    c.r_max = j.value("r_max", c.r_max);
    c.folds = j.value("folds", c.folds);
    c.seed = j.value("seed", c.seed);
    c.speech_source = j.value("speech_source", c.speech_source);
    c.synthetic_fallback = j.value("synthetic_fallback", c.synthetic_fallback);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.format = format_from_name(j.value("format", std::string(format_name(c.format))));
    c.speed_of_sound = j.value("speed_of_sound", c.speed_of_sound);
    c.distance_tol = j.value("distance_tol", c.distance_tol);
    c.materials = j.value("materials", c.materials);
    c.write_rirs = j.value("write_rirs", c.write_rirs);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("dataset config: ") + e.what());
  }
  return c;
}

json record_json(const SampleRecord& r) {
  json draws = json::object();
  for (const auto& [k, d] : r.draws) draws[k] = d;
  json files = json::object();
  for (const auto& [k, f] : r.files) files[k] = {{"path", f.path}, {"scale", f.scale}};
  return json{{"id", r.id},
              {"index", r.index},
              {"room", r.room},
              {"pair", r.pair},
              {"r", r.r},
              {"target_r", r.target_r},
              {"tau_d", r.tau_d},
              {"t_mix", r.t_mix},
              {"t60_sabine", r.t60_sabine},
              {"t60_schroeder", optional_json(r.t60_schroeder)},
              {"drr_db", decibels_json(r.drr)},
              {"c50_db", decibels_json(r.c50)},
              {"image_order", r.image_order},
              {"fold", r.fold},
              {"speech",
               {{"item", r.speech.item},
                {"talker", r.speech.talker},
                {"offset", r.speech.offset},
                {"hash", r.speech.hash}}},
              {"rir_hash", r.rir_hash},
              {"draws", draws},
              {"files", files}};
}

SampleRecord record_from(const json& j) {
  SampleRecord r;
  r.id = j.at("id").get<std::string>();
  r.index = j.at("index").get<int>();
  r.room = j.at("room").get<RoomSpec>();
  r.pair = j.at("pair").get<SourceReceiverPair>();
  r.r = j.at("r").get<double>();
  r.target_r = j.at("target_r").get<double>();
  r.tau_d = j.at("tau_d").get<double>();
  r.t_mix = j.at("t_mix").get<double>();
  r.t60_sabine = j.at("t60_sabine").get<double>();
  r.t60_schroeder = optional_from_json(j.at("t60_schroeder"));
  r.drr = decibels_from_json(j.at("drr_db"));
  r.c50 = decibels_from_json(j.at("c50_db"));
  r.image_order = j.at("image_order").get<int>();
  r.fold = j.at("fold").get<int>();
  const auto& s = j.at("speech");
  r.speech.item = s.at("item").get<std::string>();
  r.speech.talker = s.at("talker").get<std::string>();
  r.speech.offset = s.at("offset").get<std::size_t>();
  r.speech.hash = s.at("hash").get<std::uint64_t>();
  r.rir_hash = j.at("rir_hash").get<std::uint64_t>();
  for (const auto& [k, d] : j.at("draws").items()) r.draws[k] = d.get<DecalibrationDraw>();
  for (const auto& [k, f] : j.at("files").items()) {
    r.files[k] = {f.at("path").get<std::string>(), f.at("scale").get<double>()};
  }
  return r;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }

std::string cell(const Decibels& d) { return d.unbounded ? "" : fmt_double(d.db); }

}  // namespace

bool operator==(const SampleRecord& a, const SampleRecord& b) {
  return record_json(a) == record_json(b);
}

bool operator==(const Manifest& a, const Manifest& b) {
  return manifest_to_json(a) == manifest_to_json(b);
}

const SampleRecord* Manifest::find(const std::string& id) const {
  auto it = std::lower_bound(records.begin(), records.end(), id,
                             [](const SampleRecord& r, const std::string& k) { return r.id < k; });
  if (it != records.end() && it->id == id) return &*it;
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void DatasetConfig::validate() const {
  if (n <= 0) fail(ErrorCode::kInvalidArgument, "n must be positive");
  if (folds <= 0) fail(ErrorCode::kInvalidArgument, "folds must be positive");
  if (n % folds != 0) fail(ErrorCode::kIndivisibleN, "n must be divisible by folds");
  if (!(duration_s > 0.0) || !(sample_rate > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "duration and sample rate must be positive");
  }
  if (!(r_min >= 1.0) || !(r_max >= r_min)) {
    fail(ErrorCode::kInvalidArgument, "distance range must satisfy 1 <= r_min <= r_max");
  }
  if (!(distance_tol > 0.0)) fail(ErrorCode::kInvalidArgument, "distance_tol must be > 0");
  if (!(speed_of_sound > 0.0)) fail(ErrorCode::kInvalidArgument, "speed_of_sound must be > 0");
}

std::string sample_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%05d", index);
  return buf;
}

std::string waveform_key(const ScenarioSpec& s, Variant v) {
  return std::string(scenario_name(s)) + "/" + std::string(variant_name(v));
}

std::vector<int> assign_folds(int n, int k, Rng& rng) {
  if (k <= 0 || n < 0) fail(ErrorCode::kInvalidArgument, "fold count must be positive");
  if (n % k != 0) fail(ErrorCode::kIndivisibleN, "N is not divisible by the fold count");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> labels(static_cast<std::size_t>(n));
  const int block = n / k;
  for (int pos = 0; pos < n; ++pos) labels[static_cast<std::size_t>(perm[pos])] = pos / block;
  return labels;
}

DatasetGenerator::DatasetGenerator(DatasetConfig config) : config_(std::move(config)) {
  config_.validate();
  materials_ = config_.materials.empty() ? MaterialTable::builtin()
                                         : MaterialTable::from_json_file(config_.materials);
  if (!config_.speech_source.empty()) {
    try {
      corpus_ = ingest_speech(config_.speech_source, config_.duration_s, config_.sample_rate);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCorpusUnavailable || !config_.synthetic_fallback) throw;
      std::cerr << "rirlab: " << e.what() << "; using synthetic speech\n";
    }
  } else if (!config_.synthetic_fallback) {
    fail(ErrorCode::kCorpusUnavailable, "no speech source and synthetic fallback disabled");
  }

  Rng fold_rng = make_rng(config_.seed, 0, "folds");
  folds_ = assign_folds(config_.n, config_.folds, fold_rng);

  if (corpus_) {
    // Talkers are dealt round-robin to folds so that a talker never appears
    // in two folds. With fewer talkers than folds every fold draws from the
    // whole corpus.
    std::vector<std::string> talkers;
    for (const auto& it : corpus_->items) talkers.push_back(it.talker);
    std::sort(talkers.begin(), talkers.end());
    talkers.erase(std::unique(talkers.begin(), talkers.end()), talkers.end());
    items_by_fold_.assign(static_cast<std::size_t>(config_.folds), {});
    for (std::size_t i = 0; i < corpus_->items.size(); ++i) {
      const auto t = std::lower_bound(talkers.begin(), talkers.end(), corpus_->items[i].talker) -
                     talkers.begin();
      items_by_fold_[static_cast<std::size_t>(t) % items_by_fold_.size()].push_back(i);
    }
    for (const auto& f : items_by_fold_) {
      if (f.empty()) talker_disjoint_ = false;
    }
    if (!talker_disjoint_) {
      std::cerr << "rirlab: " << talkers.size() << " talkers for " << config_.folds
                << " folds; speech segments are not talker-disjoint across folds\n";
      std::vector<std::size_t> all(corpus_->items.size());
      std::iota(all.begin(), all.end(), 0);
      for (auto& f : items_by_fold_) f = all;
    }
  }
}

std::vector<double> DatasetGenerator::dry_speech(int index, int fold, SpeechRef& ref) const {
  Rng rng = make_rng(config_.seed, static_cast<std::uint64_t>(index), "speech");
  std::vector<double> x;
  if (!corpus_) {
    x = synth_speech(rng, config_.duration_s, config_.sample_rate);
    ref.item = "synthetic";
    ref.talker = "synthetic-" + sample_id(index);
    ref.offset = 0;
  } else {
    const auto& pool = items_by_fold_[static_cast<std::size_t>(fold)];
    std::size_t total = 0;
    for (auto i : pool) total += corpus_->items[i].segments;
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    std::size_t k = pick(rng);
    std::size_t item = pool.front();
    for (auto i : pool) {
      if (k < corpus_->items[i].segments) {
        item = i;
        break;
      }
      k -= corpus_->items[i].segments;
    }
    x = corpus_->load_segment(item, k);
    normalize_active_rms(x, config_.sample_rate);
    ref.item = corpus_->items[item].id;
    ref.talker = corpus_->items[item].talker;
    ref.offset = k * corpus_->segment_len;
  }
  ref.hash = hash_samples(x);
  return x;
}

RecordOutputs DatasetGenerator::generate_record(int index) const {
  const auto& c = config_;
  const auto key = static_cast<std::uint64_t>(index);
  RecordOutputs out;
  SampleRecord& rec = out.record;
  rec.id = sample_id(index);
  rec.index = index;
  rec.fold = folds_[static_cast<std::size_t>(index)];

  Rng target_rng = make_rng(c.seed, key, "target");
  rec.target_r = uniform(target_rng, c.r_min, c.r_max);

  bool done = false;
  Rir rir;
  for (int attempt = 0; attempt < kConfigAttempts && !done; ++attempt) {
    Rng rng = make_rng(c.seed, key, "config#" + std::to_string(attempt));
    std::pair<RoomSpec, SourceReceiverPair> conf;
    try {
      conf = sample_configuration(rng, rec.target_r, c.distance_tol, materials_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kGeometryInfeasible || attempt + 1 == kConfigAttempts) throw;
      continue;
    }
    SimConfig sim;
    sim.sample_rate = c.sample_rate;
    sim.speed_of_sound = c.speed_of_sound;
    sim.seed = c.seed;
    sim.max_image_order = default_image_order(conf.first, conf.second, c.speed_of_sound);
    for (int deepen = 0; deepen <= kOrderDeepenings; ++deepen) {
      rir = simulate_rir(conf.first, conf.second, sim);
      const auto mt = detect_mixing_time(rir);
      if (mt.found) {
        rec.room = conf.first;
        rec.pair = conf.second;
        rec.t_mix = mt.t_mix;
        rec.image_order = sim.max_image_order;
        done = true;
        break;
      }
      sim.max_image_order += kOrderStep;
    }
  }
  if (!done) {
    fail(ErrorCode::kGeometryInfeasible,
         "no configuration with a detectable mixing time for " + rec.id);
  }
  rir.room_ref = rec.id;
  rir.pair_ref = rec.id;
  rec.r = rec.pair.r;
  rec.tau_d = rir.tau_d;
  rec.rir_hash = hash_samples(rir.samples);

  const auto metrics = compute_metrics(rir, kDefaultGuard, &rec.room);
  rec.drr = metrics.drr;
  rec.c50 = metrics.c50;
  rec.t60_schroeder = metrics.t60_schroeder;
  rec.t60_sabine = *metrics.t60_sabine;

  out.variants = decompose(rir, rec.t_mix);
  out.dry_speech = dry_speech(index, rec.fold, rec.speech);
  const auto& speech = out.dry_speech;
  const std::size_t clip = speech.size();

  // Same level/time streams for every scenario: only the calibration flags
  // differ between the four renditions of a record.
  const Rng level_rng = make_rng(c.seed, key, "level");
  const Rng time_rng = make_rng(c.seed, key, "time");
  SpectralConvolver conv(speech.size(), rir.size());
  std::array<std::vector<std::complex<double>>, 4> rir_spec;
  for (Variant v : kAllVariants) {
    rir_spec[static_cast<std::size_t>(v)] = conv.spectrum(out.variants.get(v).samples);
  }
  const std::size_t wet_len = speech.size() + rir.size() - 1;
  std::map<double, std::vector<std::complex<double>>> speech_spec;
  for (std::size_t s = 0; s < 4; ++s) {
    const ScenarioSpec& spec = kAllScenarios[s];
    Rng lr = level_rng;
    auto level = apply_level(speech, spec, lr);
    auto it = speech_spec.find(level.gain_db);
    if (it == speech_spec.end()) {
      it = speech_spec.emplace(level.gain_db, conv.spectrum(level.signal)).first;
    }
    DecalibrationDraw draw;
    draw.gain_db = level.gain_db;
    for (Variant v : kAllVariants) {
      auto wet = conv.convolve(it->second, rir_spec[static_cast<std::size_t>(v)], wet_len);
      Rng tr = time_rng;
      auto timed = apply_time(std::move(wet), rir.tau_d, c.sample_rate, spec, tr, c.r_max,
                              c.speed_of_sound);
      timed.signal.resize(clip);
      draw.delta = timed.delta;
      out.waveforms[s][static_cast<std::size_t>(v)] = std::move(timed.signal);
    }
    rec.draws[std::string(scenario_name(spec))] = draw;
  }
  return out;
}

void DatasetGenerator::write_record(RecordOutputs& out) const {
  const auto& c = config_;
  SampleRecord& rec = out.record;
  const fs::path root(c.out_dir);
  for (std::size_t s = 0; s < 4; ++s) {
    for (Variant v : kAllVariants) {
      const std::string key = waveform_key(kAllScenarios[s], v);
      const fs::path rel = fs::path(key) / (rec.id + ".wav");
      fs::create_directories(root / rel.parent_path());
      const auto& x = out.waveforms[s][static_cast<std::size_t>(v)];
      WaveformFile wf;
      wf.path = rel.generic_string();
      if (c.format == SampleFormat::kPcm16) {
        double peak = 0.0;
        for (double y : x) peak = std::max(peak, std::abs(y));
        wf.scale = peak > 0.0 ? peak / kPcmHeadroom : 1.0;
        std::vector<double> scaled(x.size());
        const double inv = 1.0 / wf.scale;
        for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = x[i] * inv;
        write_wav((root / rel).string(), scaled, c.sample_rate, c.format);
      } else {
        write_wav((root / rel).string(), x, c.sample_rate, c.format);
      }
      rec.files[key] = wf;
    }
  }
  if (c.write_rirs) {
    fs::create_directories(root / "rirs");
    for (Variant v : kAllVariants) {
      const auto name = rec.id + "." + std::string(variant_name(v)) + ".wav";
      write_wav((root / "rirs" / name).string(), out.variants.get(v).samples, c.sample_rate,
                SampleFormat::kFloat32);
    }
  }
  fs::create_directories(root / "records");
  json j = record_json(rec);
  j["config_fingerprint"] = fnv1a(config_to_json(c).data(), config_to_json(c).size());
  write_text_file((root / "records" / (rec.id + ".json")).string(), j.dump(2) + "\n");
}

std::optional<SampleRecord> DatasetGenerator::load_existing(int index) const {
  const fs::path root(config_.out_dir);
  const auto path = root / "records" / (sample_id(index) + ".json");
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  try {
    const json j = json::parse(read_text_file(path.string()));
    const std::string cfg = config_to_json(config_);
    if (j.value("config_fingerprint", std::uint64_t{0}) != fnv1a(cfg.data(), cfg.size())) {
      return std::nullopt;
    }
    SampleRecord rec = record_from(j);
    if (rec.files.size() != 16) return std::nullopt;
    for (const auto& [_, f] : rec.files) {
      if (!fs::exists(root / f.path, ec)) return std::nullopt;
    }
    return rec;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Manifest DatasetGenerator::run(int threads, const std::function<void(int, int)>& progress) {
  const int n = config_.n;
  if (config_.out_dir.empty()) fail(ErrorCode::kInvalidArgument, "out_dir is required");
  fs::create_directories(config_.out_dir);

  std::vector<std::optional<SampleRecord>> results(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::atomic<int> finished{0};
  std::mutex err_mutex;
  std::mutex progress_mutex;
  std::exception_ptr error;
  int error_index = n;

  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        auto rec = load_existing(i);
        if (!rec) {
          auto out = generate_record(i);
          write_record(out);
          rec = std::move(out.record);
        }
        results[static_cast<std::size_t>(i)] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        // Report the lowest failing index so the error does not depend on
        // scheduling.
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
      const int d = ++finished;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, n);
      }
    }
  };
  const int workers = std::max(1, std::min(threads, n));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  Manifest m;
  m.global_seed = config_.seed;
  m.config = config_;
  m.talker_disjoint = talker_disjoint_;
  for (auto& r : results) m.records.push_back(std::move(*r));
  const fs::path root(config_.out_dir);
  write_text_file((root / "manifest.json").string(), manifest_to_json(m));
  write_text_file((root / "metrics.csv").string(), metrics_csv(m));
  return m;
}

Manifest generate(const DatasetConfig& config, int threads) {
  DatasetGenerator gen(config);
  return gen.run(threads);
}

std::string config_to_json(const DatasetConfig& config) { return config_json(config).dump(2); }

DatasetConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("dataset config: ") + e.what());
  }
  return config_from(j);
}

std::string manifest_to_json(const Manifest& m) {
  json records = json::array();
  for (const auto& r : m.records) records.push_back(record_json(r));
  json j{{"version", m.version},
         {"global_seed", m.global_seed},
         {"config", config_json(m.config)},
         {"talker_disjoint", m.talker_disjoint},
         {"records", records}};
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  Manifest m;
  try {
    const json j = json::parse(text);
    m.version = j.at("version").get<int>();
    m.global_seed = j.at("global_seed").get<std::uint64_t>();
    m.config = config_from(j.at("config"));
    m.talker_disjoint = j.value("talker_disjoint", true);
    for (const auto& r : j.at("records")) m.records.push_back(record_from(r));
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("manifest: ") + e.what());
  }
  return m;
}

Manifest read_manifest(const std::string& path) {
  Manifest m = manifest_from_json(read_text_file(path));
  const auto dir = fs::path(path).parent_path();
  m.config.out_dir = dir.empty() ? "." : dir.string();
  return m;
}

std::string metrics_csv(const Manifest& manifest) {
  std::ostringstream os;
  os << "sample_id,r,drr_db,c50_db,t60_sabine_s,t60_schroeder_s,t_mix_s\n";
  for (const auto& r : manifest.records) {
    os << r.id << ',' << fmt_double(r.r) << ',' << cell(r.drr) << ',' << cell(r.c50) << ','
       << fmt_double(r.t60_sabine) << ',' << cell(r.t60_schroeder) << ','
       << fmt_double(r.t_mix) << '\n';
  }
  return os.str();
}

std::vector<PredictionRow> builtin_baselines(const Manifest& manifest,
                                             const std::string& dataset_dir) {
  const int k = std::max(1, manifest.config.folds);
  std::vector<double> prior(static_cast<std::size_t>(k), 0.0);
  for (int test = 0; test < k; ++test) {
    const int val = (test + 1) % k;
    std::vector<double> train;
    for (const auto& r : manifest.records) {
      if (r.fold != test && (k < 3 || r.fold != val)) train.push_back(r.r);
    }
    if (train.empty()) {
      for (const auto& r : manifest.records) train.push_back(r.r);
    }
    prior[static_cast<std::size_t>(test)] = PriorConstantBaseline(train).value();
  }

  const double c = manifest.config.speed_of_sound;
  std::vector<PredictionRow> rows;
  for (const auto& rec : manifest.records) {
    if (rec.fold < 0 || rec.fold >= k) fail(ErrorCode::kFormat, "record fold out of range");
    for (const auto& spec : kAllScenarios) {
      for (Variant v : kAllVariants) {
        const auto key = waveform_key(spec, v);
        const auto it = rec.files.find(key);
        PredictionRow base{rec.id, std::string(scenario_name(spec)),
                           std::string(variant_name(v)), "", rec.r, 0.0};
        if (it != rec.files.end()) {
          const auto wav = read_wav((fs::path(dataset_dir) / it->second.path).string());
          PredictionRow row = base;
          row.method = kOnsetMethod;
          row.r_hat = onset_delay_estimate(wav.samples, wav.sample_rate, c).r_hat;
          rows.push_back(row);
        }
        PredictionRow row = base;
        row.method = kPriorMedianMethod;
        row.r_hat = prior[static_cast<std::size_t>(rec.fold)];
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace rirlab
