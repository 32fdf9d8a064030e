// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_AUDIO_HPP_
#define DCAE_AUDIO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcae/wav.hpp"

namespace dcae {

inline constexpr double kEmphasisCoeff = 0.95;
inline constexpr std::size_t kWindow = 16384;    // 1.024 s at 16 kHz
inline constexpr std::size_t kTrainHop = 8192;   // 50% overlap

/// y[0] = x[0], y[n] = x[n] - coeff * x[n-1]
template <typename T>
std::vector<T> preemphasis(std::span<const T> x, T coeff = T(kEmphasisCoeff));

/// Exact inverse recursion x[n] = y[n] + coeff * x[n-1].
template <typename T>
std::vector<T> deemphasis(std::span<const T> y, T coeff = T(kEmphasisCoeff));

std::vector<std::size_t> training_window_starts(std::size_t length, std::size_t window = kWindow,
                                                std::size_t hop = kTrainHop);

struct TrainingChunks {
  std::vector<std::vector<float>> windows;
  std::optional<std::string> warning;  // set when the clip is shorter than one window
};

TrainingChunks chunk_training(std::span<const float> clip, std::size_t window = kWindow,
                              std::size_t hop = kTrainHop);

struct InferenceChunks {
  std::vector<std::vector<float>> windows;  // last one zero-padded
  std::size_t original_length = 0;
};

InferenceChunks chunk_inference(std::span<const float> clip, std::size_t window = kWindow);

// Concatenates equal-length windows and truncates to original_length.
std::vector<float> assemble(const std::vector<std::vector<float>>& windows,
                            std::size_t original_length);

inline constexpr std::size_t kDegradeFrame = 2048;
inline constexpr std::size_t kDegradeHop = 1024;
inline constexpr std::size_t kDegradeBandBins = 32;  // 250 Hz noise bands

// Seedable stand-in for a lossy codec: sine-windowed 50% overlap-add STFT,
// every bin above bandwidth_hz removed, and per-band Gaussian noise at
// noise_level times the band RMS added to the bins that remain.
AudioClip degrade(const AudioClip& clip, double bandwidth_hz, double noise_level,
                  std::uint64_t seed);

}  // namespace dcae

#endif  // DCAE_AUDIO_HPP_
