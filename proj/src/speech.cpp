#include "speech.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include "error.hpp"
#include "wav.hpp"

namespace rirlab {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vowel {
  double f1, f2, f3;
};

constexpr std::array<Vowel, 6> kVowels{{
    {730, 1090, 2440},  // a
    {530, 1840, 2480},  // e
    {270, 2290, 3010},  // i
    {570, 840, 2410},   // o
    {300, 870, 2240},   // u
    {660, 1720, 2410},  // ae
}};
constexpr std::array<double, 3> kBandwidths{80.0, 110.0, 160.0};
constexpr double kBurstDuration = 0.005;
constexpr double kBurstDecay = 0.0015;
// Smooth pulse length in samples; a band-limited onset keeps fractional
// delay kernels from ringing ahead of the arrival.
constexpr std::size_t kBurstPulse = 5;
constexpr double kBurstNoise = 0.3;
constexpr double kBurstGain = 2.0;

// Two-pole resonator with unity gain at DC.
class Resonator {
 public:
  void set(double freq, double bw, double fs) {
    const double r = std::exp(-kPi * bw / fs);
    c_ = -r * r;
    b_ = 2.0 * r * std::cos(2.0 * kPi * freq / fs);
    a_ = 1.0 - b_ - c_;
  }
  double step(double x) {
    const double y = a_ * x + b_ * y1_ + c_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0;
  double y1_ = 0.0, y2_ = 0.0;
};

double raised_cosine(double x) { return 0.5 - 0.5 * std::cos(kPi * std::clamp(x, 0.0, 1.0)); }

long long rate_as_int(double rate) {
  const long long r = std::llround(rate);
  if (r <= 0 || std::abs(static_cast<double>(r) - rate) > 1e-9) {
    fail(ErrorCode::kInvalidArgument, "resampling needs integral positive rates");
  }
  return r;
}

}  // namespace

std::vector<bool> active_mask(const std::vector<double>& x, double sample_rate) {
  std::vector<bool> mask(x.size(), false);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return mask;
  const double floor = peak * std::pow(10.0, kSilenceDb / 20.0);
  const auto frame = static_cast<std::size_t>(std::lround(kAnalysisFrame * sample_rate));
  for (std::size_t start = 0; start < x.size(); start += frame) {
    const std::size_t end = std::min(x.size(), start + frame);
    double fpeak = 0.0;
    for (std::size_t i = start; i < end; ++i) fpeak = std::max(fpeak, std::abs(x[i]));
    if (fpeak >= floor) std::fill(mask.begin() + start, mask.begin() + end, true);
  }
  return mask;
}

double active_rms(const std::vector<double>& x, double sample_rate) {
  const auto mask = active_mask(x, sample_rate);
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!mask[i]) continue;
    acc += x[i] * x[i];
    ++n;
  }
  return n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

void normalize_active_rms(std::vector<double>& x, double sample_rate, double target) {
  const double rms = active_rms(x, sample_rate);
  if (rms == 0.0) return;
  const double k = target / rms;
  for (double& v : x) v *= k;
}

std::vector<double> synth_speech(Rng& rng, double duration, double sample_rate) {
  if (!(duration > 0.0) || !(sample_rate > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "duration and sample rate must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  std::vector<double> out(n, 0.0);
  const double fs = sample_rate;

  const double base_f0 = uniform(rng, 100.0, 200.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_vowel(0, kVowels.size() - 1);

  std::size_t pos = 0;
  bool first = true;
  std::vector<std::pair<std::size_t, double>> onsets;
  while (pos < n) {
    const double word_s = uniform(rng, 0.25, 0.8);
    const double pause_s = word_s * uniform(rng, 0.4, 0.9);
    const auto word_len = std::min(n - pos, static_cast<std::size_t>(word_s * fs));
    const Vowel va = kVowels[pick_vowel(rng)];
    const Vowel vb = kVowels[pick_vowel(rng)];
    const double vib_rate = uniform(rng, 3.0, 6.0);
    const double vib_phase = uniform(rng, 0.0, 2.0 * kPi);
    const double glide = uniform(rng, -0.15, 0.15);
    const double word_gain = uniform(rng, 0.6, 1.0);

    std::array<Resonator, 3> formants;
    // A word starts on a glottal closure so the first pulse lands on its
    // first sample.
    double phase = 1.0;
    const double attack = first ? 0.0 : 0.010 * fs;
    const double release = 0.030 * fs;
    for (std::size_t i = 0; i < word_len; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(word_len);
      const double f0 = std::clamp(
          base_f0 * (1.0 + glide * (u - 0.5)) * (1.0 + 0.05 * std::sin(2.0 * kPi * vib_rate * u * word_s + vib_phase)),
          90.0, 250.0);
      double excitation = 0.0;
      if (phase >= 1.0) {
        phase -= 1.0;
        excitation = 1.0;
      }
      phase += f0 / fs;
      excitation += 0.02 * noise(rng);

      const double f1 = va.f1 + (vb.f1 - va.f1) * u;
      const double f2 = va.f2 + (vb.f2 - va.f2) * u;
      const double f3 = va.f3 + (vb.f3 - va.f3) * u;
      formants[0].set(f1, kBandwidths[0], fs);
      formants[1].set(f2, kBandwidths[1], fs);
      formants[2].set(f3, kBandwidths[2], fs);
      double y = excitation;
      for (auto& f : formants) y = f.step(y);

      const double ii = static_cast<double>(i);
      const double tail = static_cast<double>(word_len - i);
      double env = word_gain;
      if (attack > 0.0) env *= raised_cosine(ii / attack);
      env *= raised_cosine(tail / release);
      out[pos + i] = env * y;
    }
    onsets.emplace_back(pos, word_gain);
    first = false;
    pos += word_len + static_cast<std::size_t>(pause_s * fs);
  }
  // Each word opens with a plosive-like burst 6 dB above the voiced peak.
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  const auto burst_len = static_cast<std::size_t>(kBurstDuration * fs);
  const double burst_decay = kBurstDecay * fs;
  for (const auto& [start, gain] : onsets) {
    const double a = kBurstGain * peak * (start == 0 ? 1.0 : gain);
    for (std::size_t i = 0; i < burst_len && start + i < n; ++i) {
      double shape = 0.0;
      if (i < kBurstPulse) {
        const double s = std::sin(kPi * static_cast<double>(i + 1) / (kBurstPulse + 1));
        shape = s * s;
      } else {
        shape = kBurstNoise * noise(rng) * std::exp(-static_cast<double>(i) / burst_decay);
      }
      out[start + i] += a * shape;
    }
  }
  normalize_active_rms(out, fs, kSpeechReferenceRms);
  return out;
}

std::vector<double> resample(const std::vector<double>& x, double in_rate, double out_rate) {
  const long long in = rate_as_int(in_rate);
  const long long out = rate_as_int(out_rate);
  if (in == out || x.empty()) return x;
  const long long g = std::gcd(in, out);
  const long long up = out / g;
  const long long down = in / g;
  const auto out_len = static_cast<std::size_t>(
      (static_cast<long long>(x.size()) * up + down - 1) / down);

  // Cutoff relative to the input Nyquist; 16 zero crossings each side.
  const double fc = std::min(1.0, static_cast<double>(up) / static_cast<double>(down));
  const double half_width = 16.0 / fc;
  const long taps_half = static_cast<long>(std::ceil(half_width));

  // One kernel per output phase: tau = j - phase / up for j in
  // [-taps_half + 1, taps_half].
  const long width = 2 * taps_half;
  std::vector<double> table(static_cast<std::size_t>(up * width));
  for (long long p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    for (long j = -taps_half + 1; j <= taps_half; ++j) {
      const double tau = static_cast<double>(j) - frac;
      double v = 0.0;
      if (std::abs(tau) < half_width) {
        const double arg = kPi * fc * tau;
        const double s = tau == 0.0 ? 1.0 : std::sin(arg) / arg;
        const double w = 0.5 + 0.5 * std::cos(kPi * tau / half_width);
        v = fc * s * w;
      }
      table[static_cast<std::size_t>(p * width + (j + taps_half - 1))] = v;
    }
  }

  std::vector<double> y(out_len, 0.0);
  const long n_in = static_cast<long>(x.size());
  for (std::size_t n = 0; n < out_len; ++n) {
    const long long num = static_cast<long long>(n) * down;
    const long base = static_cast<long>(num / up);
    const long long phase = num % up;
    const double* k = table.data() + phase * width;
    double acc = 0.0;
    for (long j = -taps_half + 1; j <= taps_half; ++j) {
      const long idx = base + j;
      if (idx < 0 || idx >= n_in) continue;
      acc += x[static_cast<std::size_t>(idx)] * k[j + taps_half - 1];
    }
    y[n] = acc;
  }
  return y;
}

std::vector<double> SpeechCorpus::load_segment(std::size_t item, std::size_t seg) const {
  if (item >= items.size() || seg >= items[item].segments) {
    fail(ErrorCode::kInvalidArgument, "speech segment out of range");
  }
  const auto wav = read_wav(items[item].path);
  auto x = resample(wav.samples, wav.sample_rate, sample_rate);
  const std::size_t start = seg * segment_len;
  return std::vector<double>(x.begin() + static_cast<long>(start),
                             x.begin() + static_cast<long>(start + segment_len));
}

SpeechCorpus ingest_speech(const std::string& dir, double segment_seconds,
                           double sample_rate) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    fail(ErrorCode::kCorpusUnavailable, "speech corpus directory not found: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".wav") files.push_back(fs::relative(e.path(), dir));
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

  SpeechCorpus corpus;
  corpus.root = dir;
  corpus.sample_rate = sample_rate;
  corpus.segment_len = static_cast<std::size_t>(std::llround(segment_seconds * sample_rate));
  for (const auto& rel : files) {
    const auto full = (fs::path(dir) / rel).string();
    const auto wav = read_wav(full);
    const long long in = rate_as_int(wav.sample_rate);
    const long long out = rate_as_int(sample_rate);
    const auto len = static_cast<std::size_t>(
        (static_cast<long long>(wav.samples.size()) * out + in - 1) / in);
    const std::size_t segs = len / corpus.segment_len;
    if (segs == 0) continue;
    SpeechCorpus::Item item;
    item.id = rel.generic_string();
    auto it = rel.begin();
    item.talker = std::next(it) != rel.end() ? it->string() : rel.stem().string();
    item.path = full;
    item.length = len;
    item.segments = segs;
    corpus.items.push_back(std::move(item));
  }
  if (corpus.items.empty()) {
    fail(ErrorCode::kCorpusUnavailable, "no recording of at least one segment in " + dir);
  }
  return corpus;
}

}  // namespace rirlab
