// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dcae/spectral.hpp"

namespace dcae {

namespace {

void require_equal_lengths(std::span<const float> a, std::span<const float> b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

double segmental_snr(std::span<const float> ref, std::span<const float> deg, std::size_t frame,
                     std::size_t hop) {
  require_equal_lengths(ref, deg, "segmental_snr");
  const std::size_t frames = frame_count(ref.size(), frame, hop);
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    double signal = 0.0, noise = 0.0;
    for (std::size_t i = f * hop; i < f * hop + frame; ++i) {
      const double r = ref[i], e = double(ref[i]) - double(deg[i]);
      signal += r * r;
      noise += e * e;
    }
    if (signal < 1e-10) continue;
    const double snr = noise > 0.0 ? 10.0 * std::log10(signal / noise) : kSegSnrCeilingDb;
    total += std::clamp(snr, kSegSnrFloorDb, kSegSnrCeilingDb);
    ++used;
  }
  return used ? total / static_cast<double>(used) : kSegSnrCeilingDb;
}

double log_spectral_distance(std::span<const float> ref, std::span<const float> deg,
                             std::size_t fft, std::size_t hop) {
  require_equal_lengths(ref, deg, "log_spectral_distance");
  const auto a = magnitude_spectrogram(ref, fft, hop);
  const auto b = magnitude_spectrogram(deg, fft, hop);
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    double frame_acc = 0.0;
    for (std::size_t k = 0; k < a[f].size(); ++k) {
      // As a ratio so equal magnitudes give exactly zero under FMA contraction.
      const double d = 20.0 * std::log10(std::max(a[f][k], 1e-8) / std::max(b[f][k], 1e-8));
      frame_acc += d * d;
    }
    acc += frame_acc / static_cast<double>(a[f].size());
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double rtf(double audio_seconds, double wallclock_seconds) {
  if (!(wallclock_seconds > 0.0)) throw std::invalid_argument("rtf: wall-clock time must be positive");
  if (!(audio_seconds > 0.0)) throw std::invalid_argument("rtf: audio duration must be positive");
  return audio_seconds / wallclock_seconds;
}

void EvalReport::write_tsv(std::ostream& os) const {
  os << "file\tsamples\tseg_snr_db\tlsd_db\trtf\n";
  for (const auto& e : entries) {
    os << e.file << '\t' << e.length << '\t' << e.seg_snr_db << '\t' << e.lsd_db << '\t';
    if (e.rtf) os << *e.rtf;
    else os << '-';
    os << '\n';
  }
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j{{"file", e.file},
                     {"samples", e.length},
                     {"seg_snr_db", e.seg_snr_db},
                     {"lsd_db", e.lsd_db}};
    j["rtf"] = e.rtf ? nlohmann::json(*e.rtf) : nlohmann::json(nullptr);
    files.push_back(std::move(j));
  }
  return {{"files", files}};
}

void write_spectrogram_csv(std::ostream& os, std::span<const float> signal, std::size_t fft,
                           std::size_t hop) {
  for (const auto& row : magnitude_spectrogram(signal, fft, hop)) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      os << row[k];
    }
    os << '\n';
  }
}

}  // namespace dcae
