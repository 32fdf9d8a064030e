// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_CHECKPOINT_HPP_
#define DCAE_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "dcae/model.hpp"
#include "dcae/train_state.hpp"

namespace dcae {

// On-disk layout, all integers little-endian:
//   "DCAE" | u32 version | u32 len + config JSON
//   u32 count | count x tensor                     (generator then discriminator)
//   u32 len + train-state JSON
//   u32 count | count x tensor                     (RMSprop accumulators)
// tensor := u32 len + name | u32 rank | rank x u32 dim | numel x f32
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { kIo, kBadMagic, kVersion, kTruncated, kShapeMismatch, kConfigMismatch };

  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  TrainState state;
};

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& config,
                     const ModelParams& params, const TrainState& state);

Checkpoint load_checkpoint(const std::filesystem::path& path);

// As above, but rejects a checkpoint whose config differs from expected in
// variant or layer layout.
Checkpoint load_checkpoint(const std::filesystem::path& path, const ModelConfig& expected);

}  // namespace dcae

#endif  // DCAE_CHECKPOINT_HPP_
