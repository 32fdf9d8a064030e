// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace dcae {

static_assert(std::endian::native == std::endian::little,
              "WAV samples are copied without byte swapping");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) { return std::uint16_t(p[0] | (p[1] << 8)); }
std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back(v >> 8);
}
void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}
void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

std::int16_t float_to_pcm16(float v) {
  const double clamped = std::clamp(static_cast<double>(v), -1.0, 1.0);
  const double scaled = std::round(clamped * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavError::Kind::kIo, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw WavError(WavError::Kind::kNotWave, where + "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t size = le32(hdr + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) {
        throw WavError(WavError::Kind::kTruncated, where + "fmt chunk is truncated");
      }
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw WavError(WavError::Kind::kTruncated, where + "extensible fmt chunk is truncated");
        format = le16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, bytes.size() - body);
      if (data_size < size) throw WavError(WavError::Kind::kTruncated, where + "data chunk is truncated");
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw WavError(WavError::Kind::kNotWave, where + "missing fmt chunk");
  if (!data) throw WavError(WavError::Kind::kNotWave, where + "missing data chunk");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw WavError(WavError::Kind::kUnsupportedCodec,
                   where + "unsupported sample format (format tag " + std::to_string(format) +
                       ", " + std::to_string(bits) + " bits); PCM16 or float32 required");
  }
  if (channels != 1) {
    throw WavError(WavError::Kind::kNotMono,
                   where + "mono required, file has " + std::to_string(channels) + " channels");
  }
  if (rate != kSampleRate) {
    throw WavError(WavError::Kind::kSampleRate,
                   where + "sample rate " + std::to_string(rate) + " Hz, expected " +
                       std::to_string(kSampleRate) + " Hz (resample beforehand)");
  }

  AudioClip clip;
  if (pcm16) {
    clip.samples.resize(data_size / 2);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
      const auto v = static_cast<std::int16_t>(le16(data + 2 * i));
      clip.samples[i] = static_cast<float>(v) / 32768.0f;
    }
  } else {
    clip.samples.resize(data_size / 4);
    std::memcpy(clip.samples.data(), data, clip.samples.size() * 4);
    for (float v : clip.samples) {
      if (!std::isfinite(v)) throw WavError(WavError::Kind::kUnsupportedCodec, where + "non-finite sample");
    }
  }
  return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  if (clip.sample_rate != kSampleRate) {
    throw WavError(WavError::Kind::kSampleRate,
                   path.string() + ": refusing to write " + std::to_string(clip.sample_rate) +
                       " Hz audio");
  }
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, kSampleRate);
  put32(out, kSampleRate * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (float v : clip.samples) put16(out, static_cast<std::uint16_t>(float_to_pcm16(v)));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw WavError(WavError::Kind::kIo, "cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw WavError(WavError::Kind::kIo, "write failed on " + path.string());
}

}  // namespace dcae
