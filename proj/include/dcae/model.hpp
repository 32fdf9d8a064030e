// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_MODEL_HPP_
#define DCAE_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcae/tensor.hpp"

namespace dcae {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Variant { kDcae, kDcae10 };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

// Every hyperparameter of one model + recipe. Channel lists are explicit so a
// narrowed copy (see scaled_down) keeps the same topology.
struct ModelConfig {
  Variant variant = Variant::kDcae;
  std::size_t stride = 2;
  std::size_t kernel = 31;
  std::vector<std::size_t> generator_channels;
  std::vector<std::size_t> discriminator_channels;
  std::vector<std::size_t> discriminator_fc_hidden{256, 128};
  std::size_t window = 16384;
  std::size_t sample_rate = 16000;
  bool preemphasis = true;
  double lambda0 = 100.0;
  double lambda_decay = 1e-5;
  std::size_t lambda_decay_start = 100;
  std::size_t epochs = 110;
  double learning_rate = 5e-5;
  std::size_t batch_size = 64;
  bool fresh_z_for_g = true;

  static ModelConfig dcae();
  static ModelConfig dcae10();
  // Divides every channel count (except the single output channel) by
  // divisor; used for desk-scale experiments.
  ModelConfig scaled_down(std::size_t divisor) const;

  std::size_t encoder_depth() const;   // 11 for DCAE, 5 for DCAE10
  std::size_t code_channels() const;
  std::size_t code_length() const;
  std::size_t padding() const { return (kernel - 1) / 2; }
  std::size_t output_padding() const { return stride - 1; }

  void validate() const;  // throws ConfigError

  bool operator==(const ModelConfig&) const = default;
};

nlohmann::json to_json(const ModelConfig& config);
// Strict: unknown or missing keys and wrong types raise ConfigError naming
// the offending key. The result is validated.
ModelConfig model_config_from_json(const nlohmann::json& j);

enum class LayerKind { kConv, kConvTransposed, kDense };
std::string to_string(LayerKind kind);

struct LayerDescriptor {
  std::string name;
  LayerKind kind;
  std::size_t in_channels;
  std::size_t out_channels;
  std::size_t in_length;
  std::size_t out_length;
  std::size_t stride;
  std::string activation;  // "prelu", "bn+prelu", "tanh" or "none"
  std::size_t parameter_count;
};

struct ShapePlan {
  std::vector<LayerDescriptor> generator;
  std::vector<LayerDescriptor> discriminator;
  std::size_t code_channels = 0;
  std::size_t code_length = 0;
  std::size_t latent_channels = 0;
  std::size_t discriminator_flatten = 0;

  std::size_t generator_parameters() const;
  std::size_t discriminator_parameters() const;
};

ShapePlan shape_plan(const ModelConfig& config);

struct NamedTensor {
  std::string name;
  Tensor<float> tensor;
};

struct GeneratorParams {
  std::vector<Tensor<float>> encoder_weights;  // [Cout x Cin x K]
  std::vector<Tensor<float>> encoder_slopes;
  std::vector<Tensor<float>> decoder_weights;  // [Cin x Cout x K]
  std::vector<Tensor<float>> decoder_slopes;   // one fewer than decoder_weights

  std::vector<NamedTensor> named_parameters() const;
  std::vector<Tensor<float>> parameters() const;
};

struct DiscriminatorParams {
  std::vector<Tensor<float>> conv_weights;
  std::vector<Tensor<float>> bn_gamma;
  std::vector<Tensor<float>> bn_beta;
  std::vector<Tensor<float>> conv_slopes;
  std::vector<Tensor<float>> fc_weights;  // hidden layers then the output layer
  std::vector<Tensor<float>> fc_biases;
  std::vector<Tensor<float>> fc_slopes;   // hidden layers only

  std::vector<NamedTensor> named_parameters() const;
  std::vector<Tensor<float>> parameters() const;
};

struct ModelParams {
  GeneratorParams generator;
  DiscriminatorParams discriminator;
};

inline constexpr float kInitialSlope = 0.25f;

ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

void set_requires_grad(std::vector<Tensor<float>> params, bool flag);
void zero_grad(std::vector<Tensor<float>> params);

/// coded [N x 1 x T], z [N x code_channels x code_length] -> [N x 1 x T].
Tensor<float> generator_forward(const ModelConfig& config, const GeneratorParams& params,
                                const Tensor<float>& coded, const Tensor<float>& z);

/// Scores (candidate, coded) pairs; returns shape [N]. Needs N >= 2.
Tensor<float> discriminator_forward(const ModelConfig& config, const DiscriminatorParams& params,
                                    const Tensor<float>& candidate, const Tensor<float>& coded);

}  // namespace dcae

#endif  // DCAE_MODEL_HPP_
