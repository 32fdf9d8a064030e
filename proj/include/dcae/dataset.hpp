// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_DATASET_HPP_
#define DCAE_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcae/audio.hpp"
#include "dcae/tensor.hpp"

namespace dcae {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClipPair {
  std::string name;
  std::vector<float> original;
  std::vector<float> coded;  // same length as original
};

struct ChunkRef {
  std::size_t pair;
  std::size_t offset;
};

// Original/coded clip pairs plus the index of every training window.
class PairedDataset {
 public:
  PairedDataset(std::vector<ClipPair> pairs, std::vector<std::string> skip_report,
                std::size_t window = kWindow, std::size_t hop = kTrainHop);

  const std::vector<ClipPair>& pairs() const { return pairs_; }
  const std::vector<ChunkRef>& chunks() const { return chunks_; }
  const std::vector<std::string>& skip_report() const { return skip_report_; }
  std::size_t window() const { return window_; }

  void write_skip_report(std::ostream& os) const;

 private:
  std::vector<ClipPair> pairs_;
  std::vector<ChunkRef> chunks_;
  std::vector<std::string> skip_report_;
  std::size_t window_;
};

// Pairs *.wav files by basename. Unmatched or too-short files go to the skip
// report; both clips of a pair are truncated to the shorter length.
PairedDataset pair_dataset(const std::filesystem::path& dir_original,
                           const std::filesystem::path& dir_coded, std::size_t window = kWindow,
                           std::size_t hop = kTrainHop);

struct Batch {
  Tensor<float> clean;  // x   [N x 1 x T]
  Tensor<float> coded;  // x~  [N x 1 x T]
};

// Deterministic per-epoch shuffle with drop-last batching. When emphasis is
// on, both clips of every pair are pre-emphasised before windowing.
class BatchIterator {
 public:
  BatchIterator(const PairedDataset& dataset, std::size_t batch_size, std::uint64_t seed,
                bool preemphasis);

  std::size_t batches_per_epoch() const;
  std::vector<std::size_t> epoch_order(std::size_t epoch) const;

  void start_epoch(std::size_t epoch);
  std::optional<Batch> next();

 private:
  const PairedDataset* dataset_;
  std::size_t batch_size_;
  std::uint64_t seed_;
  std::vector<std::vector<float>> original_;
  std::vector<std::vector<float>> coded_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

}  // namespace dcae

#endif  // DCAE_DATASET_HPP_
