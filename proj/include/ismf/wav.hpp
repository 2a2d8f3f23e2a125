// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_WAV_HPP_
#define ISMF_WAV_HPP_

#include <string>
#include <vector>

namespace ismf {

struct Wav {
  int sample_rate = 0;
  std::vector<std::vector<double>> channels;  // channel-major, [-1, 1) scale

  std::size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }
};

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  std::size_t frames = 0;
  double seconds() const {
    return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

/// Header-only probe (format, rate, frame count) without decoding samples.
WavInfo wav_info(const std::string& path);

/// PCM 16/24/32-bit and IEEE float32 readers. Throws std::runtime_error on
/// malformed or unsupported files.
Wav read_wav(const std::string& path);

/// 32-bit float WAV, byte-deterministic for identical inputs.
void write_wav_float32(const std::string& path,
                       const std::vector<std::vector<double>>& channels,
                       int sample_rate);

}  // namespace ismf

#endif  // ISMF_WAV_HPP_
