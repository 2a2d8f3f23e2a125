// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/wav.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ismf {

namespace {

// see http://soundfile.sapp.org/doc/WaveFormat/ ; little-endian assumed

struct FmtChunk {
  std::uint16_t audio_format = 0;  // 1 = PCM, 3 = IEEE float
  std::uint16_t num_channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw std::runtime_error("wav: " + path + ": " + what);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
}

// Walk the RIFF chunks to the fmt and data chunks.
void open_chunks(std::ifstream& in, const std::string& path, FmtChunk* fmt,
                 std::uint32_t* data_size) {
  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0) bad(path, "not a RIFF file");
  read_u32(in);
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0) bad(path, "not a WAVE file");

  bool have_fmt = false;
  for (;;) {
    in.read(tag, 4);
    std::uint32_t size = read_u32(in);
    if (!in) bad(path, "missing data chunk");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) bad(path, "short fmt chunk");
      unsigned char raw[16];
      in.read(reinterpret_cast<char*>(raw), 16);
      fmt->audio_format = raw[0] | (raw[1] << 8);
      fmt->num_channels = raw[2] | (raw[3] << 8);
      fmt->sample_rate = raw[4] | (raw[5] << 8) | (raw[6] << 16) | (std::uint32_t(raw[7]) << 24);
      fmt->bits_per_sample = raw[14] | (raw[15] << 8);
      in.seekg(size - 16 + (size & 1), std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) bad(path, "data chunk before fmt");
      *data_size = size;
      return;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
}

}  // namespace

WavInfo wav_info(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad(path, "cannot open");
  FmtChunk fmt;
  std::uint32_t data_size = 0;
  open_chunks(in, path, &fmt, &data_size);
  if (fmt.num_channels == 0 || fmt.bits_per_sample == 0) bad(path, "bad fmt chunk");
  WavInfo info;
  info.sample_rate = fmt.sample_rate;
  info.channels = fmt.num_channels;
  info.frames = data_size / (fmt.num_channels * fmt.bits_per_sample / 8);
  return info;
}

Wav read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad(path, "cannot open");
  FmtChunk fmt;
  std::uint32_t data_size = 0;
  open_chunks(in, path, &fmt, &data_size);

  int ch = fmt.num_channels;
  int bytes = fmt.bits_per_sample / 8;
  if (ch == 0 || bytes == 0) bad(path, "bad fmt chunk");
  bool is_float = fmt.audio_format == 3;
  bool is_pcm = fmt.audio_format == 1;
  if (!is_float && !is_pcm) bad(path, "unsupported audio format");
  if (is_float && fmt.bits_per_sample != 32) bad(path, "only 32-bit float supported");
  if (is_pcm && fmt.bits_per_sample != 16 && fmt.bits_per_sample != 24 &&
      fmt.bits_per_sample != 32)
    bad(path, "unsupported PCM bit depth");

  std::size_t frames = data_size / (ch * bytes);
  std::vector<char> raw(frames * ch * bytes);
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!in) bad(path, "truncated data chunk");

  Wav wav;
  wav.sample_rate = fmt.sample_rate;
  wav.channels.assign(ch, std::vector<double>(frames));
  const unsigned char* p = reinterpret_cast<const unsigned char*>(raw.data());
  for (std::size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < ch; ++c, p += bytes) {
      double v = 0.0;
      if (is_float) {
        std::uint32_t bits = p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t(p[3]) << 24);
        v = std::bit_cast<float>(bits);
      } else if (bytes == 2) {
        auto s = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        v = s / 32768.0;
      } else if (bytes == 3) {
        std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
        if (s & 0x800000) s |= ~0xFFFFFF;
        v = s / 8388608.0;
      } else {
        std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16) | (std::int32_t(p[3]) << 24);
        v = s / 2147483648.0;
      }
      wav.channels[c][i] = v;
    }
  }
  return wav;
}

void write_wav_float32(const std::string& path,
                       const std::vector<std::vector<double>>& channels,
                       int sample_rate) {
  if (channels.empty()) throw std::invalid_argument("write_wav: no channels");
  std::size_t frames = channels[0].size();
  for (const auto& c : channels)
    if (c.size() != frames) throw std::invalid_argument("write_wav: ragged channels");

  int ch = static_cast<int>(channels.size());
  std::uint32_t data_size = static_cast<std::uint32_t>(frames * ch * 4);
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  auto put_u32 = [&](std::uint32_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
    out.push_back((v >> 16) & 0xFF);
    out.push_back((v >> 24) & 0xFF);
  };
  auto put_u16 = [&](std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
  };
  auto put_tag = [&](const char* t) {
    out.insert(out.end(), t, t + 4);
  };
  put_tag("RIFF");
  put_u32(36 + data_size);
  put_tag("WAVE");
  put_tag("fmt ");
  put_u32(16);
  put_u16(3);  // IEEE float
  put_u16(static_cast<std::uint16_t>(ch));
  put_u32(static_cast<std::uint32_t>(sample_rate));
  put_u32(static_cast<std::uint32_t>(sample_rate * ch * 4));
  put_u16(static_cast<std::uint16_t>(ch * 4));
  put_u16(32);
  put_tag("data");
  put_u32(data_size);
  for (std::size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < ch; ++c) {
      auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(channels[c][i]));
      put_u32(bits);
    }
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("wav: cannot open for write: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("wav: write failed: " + path);
}

}  // namespace ismf
