// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/train.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dcae/checkpoint.hpp"
#include "dcae/ops.hpp"
#include "dcae/optim.hpp"

namespace dcae {

namespace fs = std::filesystem;

TrainState TrainState::initial(const ModelConfig& config, const ModelParams& params,
                               std::uint64_t seed) {
  TrainState s;
  s.lambda = config.lambda0;
  const auto g = params.generator.parameters();
  const auto d = params.discriminator.parameters();
  s.generator_opt = RmsPropState::for_parameters(g);
  s.discriminator_opt = RmsPropState::for_parameters(d);
  // Separate stream from the one used for weight init.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x7a5eedu};
  s.rng.seed(seq);
  return s;
}

TrainRecipe TrainRecipe::speech() { return {}; }

TrainRecipe TrainRecipe::applause() {
  TrainRecipe r;
  r.epochs = 130;
  r.lambda_decay_start = 30;
  r.preemphasis = false;
  return r;
}

TrainRecipe TrainRecipe::from_config(const ModelConfig& c) {
  return {c.epochs, c.lambda_decay_start, c.preemphasis, c.learning_rate,
          c.batch_size, c.lambda0, c.lambda_decay};
}

ModelConfig TrainRecipe::apply_to(ModelConfig c) const {
  c.epochs = epochs;
  c.lambda_decay_start = lambda_decay_start;
  c.preemphasis = preemphasis;
  c.learning_rate = learning_rate;
  c.batch_size = batch_size;
  c.lambda0 = lambda0;
  c.lambda_decay = lambda_decay;
  return c;
}

void TrainRecipe::validate() const {
  if (epochs == 0) throw ConfigError("epochs: must be positive");
  if (lambda_decay_start >= epochs) {
    throw ConfigError("lambda_decay_start: must be smaller than epochs (" +
                      std::to_string(lambda_decay_start) + " >= " + std::to_string(epochs) + ")");
  }
  if (batch_size < 2) throw ConfigError("batch_size: must be at least 2");
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0: must be positive");
  if (!(lambda_decay >= 0.0 && lambda_decay < 1.0)) throw ConfigError("lambda_decay: must lie in [0, 1)");
  if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate: must be non-negative");
}

template <typename T>
Tensor<T> d_loss(const Tensor<T>& d_real, const Tensor<T>& d_fake) {
  if (d_real.shape() != d_fake.shape()) {
    throw ShapeError("d_loss: real scores " + to_string(d_real.shape()) + " vs fake scores " +
                     to_string(d_fake.shape()));
  }
  auto real_term = mean(square(add_scalar(d_real, T(-1))));
  auto fake_term = mean(square(d_fake));
  return scale(add(real_term, fake_term), T(0.5));
}

template <typename T>
Tensor<T> g_loss(const Tensor<T>& d_fake, const Tensor<T>& x_star, const Tensor<T>& x,
                 T lambda) {
  auto adversarial = scale(mean(square(add_scalar(d_fake, T(-1)))), T(0.5));
  return add(adversarial, scale(l1_loss(x_star, x), lambda));
}

template Tensor<float> d_loss(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> d_loss(const Tensor<double>&, const Tensor<double>&);
template Tensor<float> g_loss(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&,
                              float);
template Tensor<double> g_loss(const Tensor<double>&, const Tensor<double>&,
                               const Tensor<double>&, double);

double lambda_schedule(const TrainState& state, const TrainRecipe& recipe) {
  if (state.epoch < recipe.lambda_decay_start) return recipe.lambda0;
  return state.lambda * (1.0 - recipe.lambda_decay);
}

namespace {

double grad_norm(const std::vector<Tensor<float>>& params) {
  double acc = 0.0;
  for (const auto& p : params) {
    for (float g : p.grad()) acc += double(g) * double(g);
  }
  return std::sqrt(acc);
}

// Turns grad tracking off for a parameter set for the lifetime of the guard.
class FreezeGuard {
 public:
  explicit FreezeGuard(std::vector<Tensor<float>> params) : params_(std::move(params)) {
    set_requires_grad(params_, false);
  }
  ~FreezeGuard() { set_requires_grad(params_, true); }
  FreezeGuard(const FreezeGuard&) = delete;
  FreezeGuard& operator=(const FreezeGuard&) = delete;

 private:
  std::vector<Tensor<float>> params_;
};

}  // namespace

Trainer::Trainer(ModelConfig config, ModelParams params, TrainState state)
    : config_(std::move(config)),
      recipe_(TrainRecipe::from_config(config_)),
      params_(std::move(params)),
      state_(std::move(state)) {
  config_.validate();
}

Trainer Trainer::fresh(const ModelConfig& config, std::uint64_t seed) {
  auto params = init_params(config, seed);
  auto state = TrainState::initial(config, params, seed);
  return Trainer(config, std::move(params), std::move(state));
}

Tensor<float> Trainer::sample_z(std::size_t batch) {
  Tensor<float> z(Shape{batch, config_.code_channels(), config_.code_length()});
  std::normal_distribution<float> dist(0.0f, 1.0f);
  for (auto& v : z.data()) v = dist(state_.rng);
  return z;
}

StepLosses Trainer::train_step(const Batch& batch) {
  if (!batch.clean.defined() || !batch.coded.defined() ||
      batch.clean.shape() != batch.coded.shape()) {
    throw ShapeError("train_step: clean and coded batches must have equal shapes");
  }
  const std::size_t n = batch.clean.dim(0);
  if (n < 2) throw ShapeError("train_step: batch size must be at least 2, got " + std::to_string(n));
  const auto lr = static_cast<float>(config_.learning_rate);
  auto g_params = params_.generator.parameters();
  auto d_params = params_.discriminator.parameters();

  auto diagnostics = [&](const char* which, double value, double norm) {
    std::ostringstream os;
    os << "non-finite " << which << " loss " << value << " at step " << state_.step
       << " (epoch " << state_.epoch << ", lambda " << state_.lambda << ", gradient norm "
       << norm << ")";
    return os.str();
  };

  // Discriminator update with the generator frozen.
  Tensor<float> z = sample_z(n);
  Tensor<float> fake;
  {
    NoGradGuard no_grad;
    fake = generator_forward(config_, params_.generator, batch.coded, z);
  }
  zero_grad(d_params);
  auto d_real = discriminator_forward(config_, params_.discriminator, batch.clean, batch.coded);
  auto d_fake = discriminator_forward(config_, params_.discriminator, fake, batch.coded);
  const auto ld = d_loss(d_real, d_fake);
  backward(ld);
  const double ld_value = ld.item();
  const double d_norm = grad_norm(d_params);
  if (!std::isfinite(ld_value) || !std::isfinite(d_norm)) {
    throw NonFiniteLossError(diagnostics("discriminator", ld_value, d_norm));
  }
  rmsprop_step(d_params, state_.discriminator_opt, lr);

  // Generator update with the discriminator frozen.
  if (config_.fresh_z_for_g) z = sample_z(n);
  double lg_value = 0.0, g_norm = 0.0;
  zero_grad(g_params);
  {
    FreezeGuard frozen(d_params);
    auto x_star = generator_forward(config_, params_.generator, batch.coded, z);
    auto scores = discriminator_forward(config_, params_.discriminator, x_star, batch.coded);
    const auto lg = g_loss(scores, x_star, batch.clean, static_cast<float>(state_.lambda));
    backward(lg);
    lg_value = lg.item();
    g_norm = grad_norm(g_params);
  }
  if (!std::isfinite(lg_value) || !std::isfinite(g_norm)) {
    throw NonFiniteLossError(diagnostics("generator", lg_value, g_norm));
  }
  rmsprop_step(g_params, state_.generator_opt, lr);

  ++state_.step;
  state_.lambda = lambda_schedule(state_, recipe_);
  return {ld_value, lg_value};
}

fs::path train(Trainer& trainer, const PairedDataset& dataset, std::uint64_t seed,
               const fs::path& checkpoint_dir, std::ostream& log) {
  const auto& recipe = trainer.recipe();
  recipe.validate();
  std::error_code ec;
  fs::create_directories(checkpoint_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create checkpoint directory " + checkpoint_dir.string() +
                             ": " + ec.message());
  }
  BatchIterator batches(dataset, recipe.batch_size, seed, recipe.preemphasis);
  if (batches.batches_per_epoch() == 0) {
    throw DatasetError("dataset has " + std::to_string(dataset.chunks().size()) +
                       " windows, fewer than one batch of " + std::to_string(recipe.batch_size));
  }

  auto& state = trainer.state();
  char line[160];
  while (state.epoch < recipe.epochs) {
    batches.start_epoch(state.epoch);
    while (auto batch = batches.next()) {
      const double lambda = state.lambda;
      const auto losses = trainer.train_step(*batch);
      std::snprintf(line, sizeof line, "%zu %zu %.9g %.6g %.6g", state.epoch, state.step, lambda,
                    losses.d_loss, losses.g_loss);
      log << line << '\n';
    }
    log.flush();
    ++state.epoch;
    char name[32];
    std::snprintf(name, sizeof name, "epoch_%04zu.dcae", state.epoch);
    save_checkpoint(checkpoint_dir / name, trainer.config(), trainer.params(), state);
  }
  const fs::path final_path = checkpoint_dir / "final.dcae";
  save_checkpoint(final_path, trainer.config(), trainer.params(), state);
  return final_path;
}

fs::path train(const ModelConfig& config, const PairedDataset& dataset, std::uint64_t seed,
               const fs::path& checkpoint_dir, std::ostream& log) {
  Trainer trainer = Trainer::fresh(config, seed);
  return train(trainer, dataset, seed, checkpoint_dir, log);
}

}  // namespace dcae
