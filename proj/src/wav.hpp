#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rirlab {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavData {
  std::vector<double> samples;  // mono; multi-channel input is averaged
  double sample_rate = 0.0;
  int channels = 1;              // channel count of the source file
};

// Reads 8/16/24/32-bit PCM and 32/64-bit float RIFF/WAVE files. Throws
// Format on anything it cannot parse.
WavData read_wav(const std::string& path);
WavData parse_wav(const std::vector<std::uint8_t>& bytes);

// Mono writer. PCM16 clamps to [-1, 1) before quantising.
void write_wav(const std::string& path, const std::vector<double>& samples,
               double sample_rate, SampleFormat format);
std::vector<std::uint8_t> encode_wav(const std::vector<double>& samples, double sample_rate,
                                     SampleFormat format);

}  // namespace rirlab
