#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rng.hpp"

namespace rirlab {

// RMS that active speech is normalised to (about -26 dBFS).
inline constexpr double kSpeechReferenceRms = 0.05;
// Frames quieter than this relative to the signal peak count as silence.
inline constexpr double kSilenceDb = -40.0;
inline constexpr double kAnalysisFrame = 0.020;

// Speech-like test signal: glottal pulse train with drifting f0 in
// [90, 250] Hz through a cascade of three formant resonators, organised in
// words separated by pauses (at least 20 % silence). Every word opens with
// a short plosive burst. The first word starts
// at sample 0 so the signal onset is at t = 0. Active-region RMS equals
// kSpeechReferenceRms.
std::vector<double> synth_speech(Rng& rng, double duration, double sample_rate);

// Samples of x that belong to non-silent analysis frames.
std::vector<bool> active_mask(const std::vector<double>& x, double sample_rate);
double active_rms(const std::vector<double>& x, double sample_rate);
// Scales x so its active RMS equals `target`; silent input is left alone.
void normalize_active_rms(std::vector<double>& x, double sample_rate,
                          double target = kSpeechReferenceRms);

// Windowed-sinc rational resampler. Output length is
// ceil(len * out_rate / in_rate).
std::vector<double> resample(const std::vector<double>& x, double in_rate, double out_rate);

// Index of a directory of mono WAV recordings, ordered by relative path.
struct SpeechCorpus {
  struct Item {
    std::string id;      // path relative to the corpus root
    std::string talker;  // first directory component, or the file stem
    std::string path;
    std::size_t length = 0;    // samples at the corpus rate
    std::size_t segments = 0;  // non-overlapping segments of segment_len
  };

  std::string root;
  double sample_rate = 16000.0;
  std::size_t segment_len = 0;
  std::vector<Item> items;

  // Resampled samples [seg * segment_len, (seg + 1) * segment_len).
  std::vector<double> load_segment(std::size_t item, std::size_t seg) const;
};

// Items shorter than one segment are skipped. CorpusUnavailable when no
// usable item remains.
SpeechCorpus ingest_speech(const std::string& dir, double segment_seconds = 10.0,
                           double sample_rate = 16000.0);

}  // namespace rirlab
