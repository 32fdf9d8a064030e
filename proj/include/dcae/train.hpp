// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_TRAIN_HPP_
#define DCAE_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dcae/dataset.hpp"
#include "dcae/model.hpp"
#include "dcae/tensor.hpp"
#include "dcae/train_state.hpp"

namespace dcae {

// The training-side slice of a ModelConfig.
struct TrainRecipe {
  std::size_t epochs = 110;
  std::size_t lambda_decay_start = 100;
  bool preemphasis = true;
  double learning_rate = 5e-5;
  std::size_t batch_size = 64;
  double lambda0 = 100.0;
  double lambda_decay = 1e-5;

  static TrainRecipe speech();
  static TrainRecipe applause();
  static TrainRecipe from_config(const ModelConfig& config);

  ModelConfig apply_to(ModelConfig config) const;
  void validate() const;  // throws ConfigError
};

/// Least-squares discriminator loss, 0.5*mean((D(x)-1)^2) + 0.5*mean(D(x*)^2).
template <typename T>
Tensor<T> d_loss(const Tensor<T>& d_real, const Tensor<T>& d_fake);

/// 0.5*mean((D(x*)-1)^2) + lambda * mean|x* - x|.
template <typename T>
Tensor<T> g_loss(const Tensor<T>& d_fake, const Tensor<T>& x_star, const Tensor<T>& x, T lambda);

// Lambda to use after one more optimizer step from `state`: lambda0 while
// state.epoch < decay start, otherwise the current value times (1 - decay).
double lambda_schedule(const TrainState& state, const TrainRecipe& recipe);

class NonFiniteLossError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepLosses {
  double d_loss;
  double g_loss;
};

// Owns the model and its optimisation state for one training run.
class Trainer {
 public:
  Trainer(ModelConfig config, ModelParams params, TrainState state);
  static Trainer fresh(const ModelConfig& config, std::uint64_t seed);

  // One discriminator update followed by one generator update.
  StepLosses train_step(const Batch& batch);

  Tensor<float> sample_z(std::size_t batch);

  const ModelConfig& config() const { return config_; }
  const TrainRecipe& recipe() const { return recipe_; }
  ModelParams& params() { return params_; }
  const ModelParams& params() const { return params_; }
  TrainState& state() { return state_; }
  const TrainState& state() const { return state_; }

 private:
  ModelConfig config_;
  TrainRecipe recipe_;
  ModelParams params_;
  TrainState state_;
};

// Runs the remaining epochs of `trainer` over the dataset, logging one line
// per step ("epoch step lambda d_loss g_loss") and writing
// epoch_NNNN.dcae after every epoch plus final.dcae. Returns the final path.
std::filesystem::path train(Trainer& trainer, const PairedDataset& dataset, std::uint64_t seed,
                            const std::filesystem::path& checkpoint_dir, std::ostream& log);

std::filesystem::path train(const ModelConfig& config, const PairedDataset& dataset,
                            std::uint64_t seed, const std::filesystem::path& checkpoint_dir,
                            std::ostream& log);

}  // namespace dcae

#endif  // DCAE_TRAIN_HPP_
