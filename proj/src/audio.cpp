// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/audio.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "dcae/spectral.hpp"

namespace dcae {

template <typename T>
std::vector<T> preemphasis(std::span<const T> x, T coeff) {
  std::vector<T> y(x.size());
  const double c = coeff;
  for (std::size_t n = 0; n < x.size(); ++n) {
    y[n] = static_cast<T>(n ? double(x[n]) - c * double(x[n - 1]) : double(x[n]));
  }
  return y;
}

template <typename T>
std::vector<T> deemphasis(std::span<const T> y, T coeff) {
  // Double-precision state keeps the single-precision round trip tight.
  std::vector<T> x(y.size());
  const double c = coeff;
  double prev = 0.0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    prev = n ? double(y[n]) + c * prev : double(y[n]);
    x[n] = static_cast<T>(prev);
  }
  return x;
}

template std::vector<float> preemphasis(std::span<const float>, float);
template std::vector<double> preemphasis(std::span<const double>, double);
template std::vector<float> deemphasis(std::span<const float>, float);
template std::vector<double> deemphasis(std::span<const double>, double);

std::vector<std::size_t> training_window_starts(std::size_t length, std::size_t window,
                                                std::size_t hop) {
  if (window == 0 || hop == 0) throw std::invalid_argument("window and hop must be positive");
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + window <= length; s += hop) starts.push_back(s);
  return starts;
}

TrainingChunks chunk_training(std::span<const float> clip, std::size_t window, std::size_t hop) {
  TrainingChunks out;
  for (auto s : training_window_starts(clip.size(), window, hop)) {
    out.windows.emplace_back(clip.begin() + s, clip.begin() + s + window);
  }
  if (clip.size() < window) {
    out.warning = "clip of " + std::to_string(clip.size()) + " samples is shorter than the " +
                  std::to_string(window) + "-sample window";
  }
  return out;
}

InferenceChunks chunk_inference(std::span<const float> clip, std::size_t window) {
  if (window == 0) throw std::invalid_argument("window must be positive");
  InferenceChunks out;
  out.original_length = clip.size();
  for (std::size_t s = 0; s < clip.size(); s += window) {
    const std::size_t n = std::min(window, clip.size() - s);
    std::vector<float> w(window, 0.0f);
    std::copy_n(clip.begin() + s, n, w.begin());
    out.windows.push_back(std::move(w));
  }
  return out;
}

std::vector<float> assemble(const std::vector<std::vector<float>>& windows,
                            std::size_t original_length) {
  if (windows.empty()) {
    if (original_length != 0) throw std::invalid_argument("assemble: no windows for a non-empty clip");
    return {};
  }
  const std::size_t window = windows.front().size();
  for (const auto& w : windows) {
    if (w.size() != window) {
      throw std::invalid_argument("assemble: inconsistent window lengths (" +
                                  std::to_string(window) + " vs " + std::to_string(w.size()) + ")");
    }
  }
  if (original_length > window * windows.size()) {
    throw std::invalid_argument("assemble: original length exceeds the windowed length");
  }
  std::vector<float> out;
  out.reserve(window * windows.size());
  for (const auto& w : windows) out.insert(out.end(), w.begin(), w.end());
  out.resize(original_length);
  return out;
}

AudioClip degrade(const AudioClip& clip, double bandwidth_hz, double noise_level,
                  std::uint64_t seed) {
  const double nyquist = clip.sample_rate / 2.0;
  if (!(bandwidth_hz > 0.0) || bandwidth_hz >= nyquist) {
    throw std::invalid_argument("degrade: bandwidth must lie in (0, " + std::to_string(nyquist) +
                                ") Hz, got " + std::to_string(bandwidth_hz));
  }
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
    throw std::invalid_argument("degrade: noise level must be finite and non-negative");
  }
  constexpr std::size_t frame = kDegradeFrame, hop = kDegradeHop;
  const std::size_t len = clip.samples.size();
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  if (len == 0) return out;

  // A leading hop of padding so every real sample is covered by two frames.
  // The padding is an odd reflection about the end samples: zeros would put
  // a step into the edge frames and leak it across the whole band.
  const std::size_t frames = (hop + len + hop - 1) / hop + 1;
  const std::size_t padded = (frames - 1) * hop + frame;
  std::vector<double> input(padded), output(padded, 0.0);
  const auto& x = clip.samples;
  for (std::size_t i = 0; i < padded; ++i) {
    const long t = static_cast<long>(i) - static_cast<long>(hop);
    const long last = static_cast<long>(len) - 1;
    if (t < 0) {
      input[i] = 2.0 * x[0] - x[std::min(-t, last)];
    } else if (t > last) {
      input[i] = 2.0 * x[last] - x[std::max(2 * last - t, 0L)];
    } else {
      input[i] = x[t];
    }
  }

  RealFft fft(frame);
  const auto window = sine_window(frame);
  const double bin_hz = clip.sample_rate / static_cast<double>(frame);
  // Bins [0, kept) survive. A bin is kept only if it lies a full bin spacing
  // below the cutoff, so its window main lobe does not reach past it.
  std::size_t kept = 0;
  while (kept < fft.bins() && static_cast<double>(kept + 1) * bin_hz <= bandwidth_hz) ++kept;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> buf(frame);
  std::vector<std::complex<double>> spec(fft.bins());

  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < frame; ++i) buf[i] = window[i] * input[start + i];
    fft.forward(buf, spec);
    std::fill(spec.begin() + kept, spec.end(), std::complex<double>(0.0, 0.0));
    if (noise_level > 0.0) {
      for (std::size_t b0 = 0; b0 < kept; b0 += kDegradeBandBins) {
        const std::size_t b1 = std::min(kept, b0 + kDegradeBandBins);
        double energy = 0.0;
        for (std::size_t k = b0; k < b1; ++k) energy += std::norm(spec[k]);
        const double sigma = noise_level * std::sqrt(energy / static_cast<double>(b1 - b0));
        const double per_component = sigma / std::sqrt(2.0);
        for (std::size_t k = b0; k < b1; ++k) {
          const double re = gauss(rng), im = gauss(rng);
          spec[k] += std::complex<double>(per_component * re, per_component * im);
        }
      }
    }
    fft.inverse(spec, buf);
    for (std::size_t i = 0; i < frame; ++i) output[start + i] += window[i] * buf[i];
  }

  out.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.samples[i] = static_cast<float>(std::clamp(output[hop + i], -1.0, 1.0));
  }
  return out;
}

}  // namespace dcae
