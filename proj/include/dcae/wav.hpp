// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_WAV_HPP_
#define DCAE_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcae {

inline constexpr std::uint32_t kSampleRate = 16000;

// Mono 16 kHz waveform with samples in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  std::uint32_t sample_rate = kSampleRate;

  double seconds() const { return double(samples.size()) / double(sample_rate); }
};

class WavError : public std::runtime_error {
 public:
  enum class Kind { kIo, kNotWave, kTruncated, kUnsupportedCodec, kNotMono, kSampleRate };

  WavError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Accepts RIFF/WAVE with PCM16 or IEEE float32 samples, one channel, 16 kHz.
// PCM16 is scaled by 1/32768. No resampling or downmixing is attempted.
AudioClip read_wav(const std::filesystem::path& path);

// Writes PCM16; samples are clamped to [-1, 1] and rounded half away from zero.
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

std::int16_t float_to_pcm16(float v);

}  // namespace dcae

#endif  // DCAE_WAV_HPP_
