// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_METRICS_HPP_
#define DCAE_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace dcae {

inline constexpr double kSegSnrFloorDb = -10.0;
inline constexpr double kSegSnrCeilingDb = 35.0;

// Mean per-frame SNR with each frame clamped to [-10, 35] dB. Frames whose
// reference energy is below 1e-10 are skipped; if all are, returns the ceiling.
double segmental_snr(std::span<const float> ref, std::span<const float> deg,
                     std::size_t frame = 512, std::size_t hop = 256);

// RMS over frames of the RMS over bins of the 20*log10 magnitude difference
// (Hann window, magnitudes floored at 1e-8). Zero frames -> 0.
double log_spectral_distance(std::span<const float> ref, std::span<const float> deg,
                             std::size_t fft = 1024, std::size_t hop = 512);

// Seconds of audio processed per wall-clock second.
double rtf(double audio_seconds, double wallclock_seconds);

struct EvalEntry {
  std::string file;
  std::size_t length = 0;  // samples
  double seg_snr_db = 0.0;
  double lsd_db = 0.0;
  std::optional<double> rtf;  // only when processing time was measured
};

struct EvalReport {
  std::vector<EvalEntry> entries;

  void write_tsv(std::ostream& os) const;
  nlohmann::json to_json() const;
};

// One row per frame, fft/2+1 comma-separated magnitudes per row.
void write_spectrogram_csv(std::ostream& os, std::span<const float> signal,
                           std::size_t fft = 1024, std::size_t hop = 512);

}  // namespace dcae

#endif  // DCAE_METRICS_HPP_
