// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/dataset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace dcae {

namespace fs = std::filesystem;

PairedDataset::PairedDataset(std::vector<ClipPair> pairs, std::vector<std::string> skip_report,
                             std::size_t window, std::size_t hop)
    : skip_report_(std::move(skip_report)), window_(window) {
  for (auto& p : pairs) {
    const std::size_t len = std::min(p.original.size(), p.coded.size());
    p.original.resize(len);
    p.coded.resize(len);
    const auto starts = training_window_starts(len, window, hop);
    if (starts.empty()) {
      skip_report_.push_back(p.name + ": " + std::to_string(len) +
                             " samples is shorter than one window");
      continue;
    }
    for (auto s : starts) chunks_.push_back({pairs_.size(), s});
    pairs_.push_back(std::move(p));
  }
}

void PairedDataset::write_skip_report(std::ostream& os) const {
  for (const auto& line : skip_report_) os << "skip\t" << line << '\n';
}

namespace {

std::map<std::string, fs::path> list_wavs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DatasetError("dataset directory not found: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      out.emplace(entry.path().filename().string(), entry.path());
    }
  }
  return out;
}

}  // namespace

PairedDataset pair_dataset(const fs::path& dir_original, const fs::path& dir_coded,
                           std::size_t window, std::size_t hop) {
  const auto originals = list_wavs(dir_original);
  const auto coded = list_wavs(dir_coded);
  std::vector<ClipPair> pairs;
  std::vector<std::string> report;
  for (const auto& [name, path] : originals) {
    auto it = coded.find(name);
    if (it == coded.end()) {
      report.push_back(name + ": no coded counterpart in " + dir_coded.string());
      continue;
    }
    ClipPair p;
    p.name = name;
    p.original = read_wav(path).samples;
    p.coded = read_wav(it->second).samples;
    pairs.push_back(std::move(p));
  }
  for (const auto& [name, path] : coded) {
    if (!originals.count(name)) {
      report.push_back(name + ": no original counterpart in " + dir_original.string());
    }
  }
  return PairedDataset(std::move(pairs), std::move(report), window, hop);
}

BatchIterator::BatchIterator(const PairedDataset& dataset, std::size_t batch_size,
                             std::uint64_t seed, bool preemphasis)
    : dataset_(&dataset), batch_size_(batch_size), seed_(seed) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (dataset.chunks().empty()) throw DatasetError("dataset has no training windows");
  for (const auto& p : dataset.pairs()) {
    if (preemphasis) {
      original_.push_back(dcae::preemphasis<float>(p.original));
      coded_.push_back(dcae::preemphasis<float>(p.coded));
    } else {
      original_.push_back(p.original);
      coded_.push_back(p.coded);
    }
  }
}

std::size_t BatchIterator::batches_per_epoch() const {
  return dataset_->chunks().size() / batch_size_;
}

std::vector<std::size_t> BatchIterator::epoch_order(std::size_t epoch) const {
  std::vector<std::size_t> order(dataset_->chunks().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(epoch)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

void BatchIterator::start_epoch(std::size_t epoch) {
  order_ = epoch_order(epoch);
  cursor_ = 0;
}

std::optional<Batch> BatchIterator::next() {
  if (cursor_ + batch_size_ > order_.size()) return std::nullopt;
  const std::size_t t = dataset_->window();
  Tensor<float> clean(Shape{batch_size_, 1, t}), coded(Shape{batch_size_, 1, t});
  for (std::size_t b = 0; b < batch_size_; ++b) {
    const auto& ref = dataset_->chunks()[order_[cursor_ + b]];
    std::copy_n(original_[ref.pair].begin() + ref.offset, t, clean.data().begin() + b * t);
    std::copy_n(coded_[ref.pair].begin() + ref.offset, t, coded.data().begin() + b * t);
  }
  cursor_ += batch_size_;
  return Batch{clean, coded};
}

}  // namespace dcae
