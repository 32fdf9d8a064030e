// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/model.hpp"

#include <cmath>
#include <random>
#include <set>

#include "dcae/ops.hpp"

namespace dcae {

namespace {

const std::vector<std::size_t> kDcaeGenerator{16,  32,  32,  64,  64, 128, 128, 256,
                                              256, 512, 1024, 512, 256, 256, 128, 128,
                                              64,  64,  32,  32,  16,  1};
const std::vector<std::size_t> kDcae10Generator{64, 128, 256, 512, 1024, 512, 256, 128, 64, 1};

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

std::size_t expected_stride(Variant v) { return v == Variant::kDcae ? 2 : 4; }
std::size_t expected_layers(Variant v) { return v == Variant::kDcae ? 22 : 10; }

}  // namespace

std::string to_string(Variant v) { return v == Variant::kDcae ? "DCAE" : "DCAE10"; }

Variant variant_from_string(const std::string& name) {
  if (name == "DCAE") return Variant::kDcae;
  if (name == "DCAE10") return Variant::kDcae10;
  throw ConfigError("variant: expected \"DCAE\" or \"DCAE10\", got \"" + name + "\"");
}

ModelConfig ModelConfig::dcae() {
  ModelConfig c;
  c.variant = Variant::kDcae;
  c.stride = 2;
  c.generator_channels = kDcaeGenerator;
  c.discriminator_channels.assign(kDcaeGenerator.begin(), kDcaeGenerator.begin() + 11);
  return c;
}

ModelConfig ModelConfig::dcae10() {
  ModelConfig c;
  c.variant = Variant::kDcae10;
  c.stride = 4;
  c.generator_channels = kDcae10Generator;
  c.discriminator_channels.assign(kDcae10Generator.begin(), kDcae10Generator.begin() + 5);
  return c;
}

ModelConfig ModelConfig::scaled_down(std::size_t divisor) const {
  if (divisor == 0) throw ConfigError("scaled_down: divisor must be positive");
  auto shrink = [divisor](std::vector<std::size_t> list, bool keep_last) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (keep_last && i + 1 == list.size()) break;
      if (list[i] % divisor != 0 || list[i] / divisor == 0) {
        throw ConfigError("scaled_down: channel count " + std::to_string(list[i]) +
                          " not divisible by " + std::to_string(divisor));
      }
      list[i] /= divisor;
    }
    return list;
  };
  ModelConfig c = *this;
  c.generator_channels = shrink(generator_channels, true);
  c.discriminator_channels = shrink(discriminator_channels, false);
  return c;
}

std::size_t ModelConfig::encoder_depth() const { return generator_channels.size() / 2; }
std::size_t ModelConfig::code_channels() const { return generator_channels.at(encoder_depth() - 1); }
std::size_t ModelConfig::code_length() const { return window / ipow(stride, encoder_depth()); }

void ModelConfig::validate() const {
  const std::string v = to_string(variant);
  if (stride != expected_stride(variant)) {
    throw ConfigError("stride: " + v + " uses stride " + std::to_string(expected_stride(variant)) +
                      ", got " + std::to_string(stride));
  }
  if (kernel == 0 || kernel % 2 == 0) throw ConfigError("kernel: must be odd and positive");
  if (generator_channels.size() != expected_layers(variant)) {
    throw ConfigError("generator_channels: " + v + " has " +
                      std::to_string(expected_layers(variant)) + " layers, got " +
                      std::to_string(generator_channels.size()));
  }
  const std::size_t depth = encoder_depth();
  for (auto c : generator_channels) {
    if (c == 0) throw ConfigError("generator_channels: entries must be positive");
  }
  if (generator_channels.back() != 1) {
    throw ConfigError("generator_channels: last layer must have 1 channel");
  }
  for (std::size_t j = 0; j + 1 < depth; ++j) {
    if (generator_channels[depth + j] != generator_channels[depth - 2 - j]) {
      throw ConfigError("generator_channels: decoder must mirror the encoder (entry " +
                        std::to_string(depth + j) + ")");
    }
  }
  if (discriminator_channels.size() != depth ||
      !std::equal(discriminator_channels.begin(), discriminator_channels.end(),
                  generator_channels.begin())) {
    throw ConfigError("discriminator_channels: must equal the generator encoder list");
  }
  if (discriminator_fc_hidden.size() != 2 || discriminator_fc_hidden[0] == 0 ||
      discriminator_fc_hidden[1] == 0) {
    throw ConfigError("discriminator_fc_hidden: expected two positive sizes");
  }
  const std::size_t reduction = ipow(stride, depth);
  if (window == 0 || window % reduction != 0) {
    throw ConfigError("window: " + std::to_string(window) + " is not a multiple of " +
                      std::to_string(reduction));
  }
  if (sample_rate != 16000) throw ConfigError("sample_rate: only 16000 Hz is supported");
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0: must be positive");
  if (!(lambda_decay >= 0.0 && lambda_decay < 1.0)) {
    throw ConfigError("lambda_decay: must lie in [0, 1)");
  }
  if (epochs == 0) throw ConfigError("epochs: must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate: must be finite and non-negative");
  }
  if (batch_size < 2) throw ConfigError("batch_size: must be at least 2");
}

nlohmann::json to_json(const ModelConfig& c) {
  return nlohmann::json{
      {"variant", to_string(c.variant)},
      {"stride", c.stride},
      {"kernel", c.kernel},
      {"generator_channels", c.generator_channels},
      {"discriminator_channels", c.discriminator_channels},
      {"discriminator_fc_hidden", c.discriminator_fc_hidden},
      {"window", c.window},
      {"sample_rate", c.sample_rate},
      {"preemphasis", c.preemphasis},
      {"lambda0", c.lambda0},
      {"lambda_decay", c.lambda_decay},
      {"lambda_decay_start", c.lambda_decay_start},
      {"epochs", c.epochs},
      {"learning_rate", c.learning_rate},
      {"batch_size", c.batch_size},
      {"fresh_z_for_g", c.fresh_z_for_g},
  };
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string(key) + ": missing required key");
  return *it;
}

std::size_t get_count(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) throw ConfigError(std::string(key) + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

double get_real(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return v.get<double>();
}

bool get_flag(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_boolean()) throw ConfigError(std::string(key) + ": expected true or false");
  return v.get<bool>();
}

std::vector<std::size_t> get_list(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array()) throw ConfigError(std::string(key) + ": expected a list of integers");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned()) throw ConfigError(std::string(key) + ": expected a list of integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

}  // namespace

ModelConfig model_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("model config: expected a JSON object");
  static const std::set<std::string> known{
      "variant", "stride", "kernel", "generator_channels", "discriminator_channels",
      "discriminator_fc_hidden", "window", "sample_rate", "preemphasis", "lambda0",
      "lambda_decay", "lambda_decay_start", "epochs", "learning_rate", "batch_size",
      "fresh_z_for_g"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(key + ": unknown key");
  }
  const auto& variant = field(j, "variant");
  if (!variant.is_string()) throw ConfigError("variant: expected a string");
  ModelConfig c;
  c.variant = variant_from_string(variant.get<std::string>());
  c.stride = get_count(j, "stride");
  c.kernel = get_count(j, "kernel");
  c.generator_channels = get_list(j, "generator_channels");
  c.discriminator_channels = get_list(j, "discriminator_channels");
  c.discriminator_fc_hidden = get_list(j, "discriminator_fc_hidden");
  c.window = get_count(j, "window");
  c.sample_rate = get_count(j, "sample_rate");
  c.preemphasis = get_flag(j, "preemphasis");
  c.lambda0 = get_real(j, "lambda0");
  c.lambda_decay = get_real(j, "lambda_decay");
  c.lambda_decay_start = get_count(j, "lambda_decay_start");
  c.epochs = get_count(j, "epochs");
  c.learning_rate = get_real(j, "learning_rate");
  c.batch_size = get_count(j, "batch_size");
  c.fresh_z_for_g = get_flag(j, "fresh_z_for_g");
  c.validate();
  return c;
}

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kConvTransposed: return "convT";
    case LayerKind::kDense: return "dense";
  }
  return "?";
}

std::size_t ShapePlan::generator_parameters() const {
  std::size_t n = 0;
  for (const auto& l : generator) n += l.parameter_count;
  return n;
}

std::size_t ShapePlan::discriminator_parameters() const {
  std::size_t n = 0;
  for (const auto& l : discriminator) n += l.parameter_count;
  return n;
}

ShapePlan shape_plan(const ModelConfig& config) {
  config.validate();
  const std::size_t depth = config.encoder_depth();
  const std::size_t k = config.kernel, s = config.stride;
  const auto& g = config.generator_channels;
  ShapePlan plan;

  std::size_t len = config.window, in_ch = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    const std::size_t out_len = len / s;
    plan.generator.push_back({"g.enc" + std::to_string(i), LayerKind::kConv, in_ch, g[i], len,
                              out_len, s, "prelu", g[i] * in_ch * k + g[i]});
    in_ch = g[i];
    len = out_len;
  }
  plan.code_channels = in_ch;
  plan.code_length = len;
  plan.latent_channels = 2 * in_ch;

  in_ch = plan.latent_channels;
  for (std::size_t j = 0; j < depth; ++j) {
    const std::size_t out_ch = g[depth + j];
    const bool last = j + 1 == depth;
    plan.generator.push_back({"g.dec" + std::to_string(j), LayerKind::kConvTransposed, in_ch,
                              out_ch, len, len * s, s, last ? "tanh" : "prelu",
                              in_ch * out_ch * k + (last ? 0 : out_ch)});
    len *= s;
    // The next stage sees this output concatenated with the matching skip.
    in_ch = 2 * out_ch;
  }

  len = config.window;
  in_ch = 2;
  for (std::size_t i = 0; i < depth; ++i) {
    const std::size_t out_ch = config.discriminator_channels[i];
    plan.discriminator.push_back({"d.conv" + std::to_string(i), LayerKind::kConv, in_ch, out_ch,
                                  len, len / s, s, "bn+prelu", out_ch * in_ch * k + 3 * out_ch});
    in_ch = out_ch;
    len /= s;
  }
  plan.discriminator_flatten = in_ch * len;
  std::size_t features = plan.discriminator_flatten;
  for (std::size_t j = 0; j < config.discriminator_fc_hidden.size(); ++j) {
    const std::size_t out = config.discriminator_fc_hidden[j];
    plan.discriminator.push_back({"d.fc" + std::to_string(j), LayerKind::kDense, features, out,
                                  1, 1, 1, "prelu", out * features + 2 * out});
    features = out;
  }
  plan.discriminator.push_back(
      {"d.out", LayerKind::kDense, features, 1, 1, 1, 1, "none", features + 1});
  return plan;
}

std::vector<NamedTensor> GeneratorParams::named_parameters() const {
  std::vector<NamedTensor> out;
  for (std::size_t i = 0; i < encoder_weights.size(); ++i) {
    const std::string prefix = "g.enc" + std::to_string(i);
    out.push_back({prefix + ".weight", encoder_weights[i]});
    out.push_back({prefix + ".prelu", encoder_slopes[i]});
  }
  for (std::size_t j = 0; j < decoder_weights.size(); ++j) {
    const std::string prefix = "g.dec" + std::to_string(j);
    out.push_back({prefix + ".weight", decoder_weights[j]});
    if (j < decoder_slopes.size()) out.push_back({prefix + ".prelu", decoder_slopes[j]});
  }
  return out;
}

std::vector<Tensor<float>> GeneratorParams::parameters() const {
  std::vector<Tensor<float>> out;
  for (auto& nt : named_parameters()) out.push_back(nt.tensor);
  return out;
}

std::vector<NamedTensor> DiscriminatorParams::named_parameters() const {
  std::vector<NamedTensor> out;
  for (std::size_t i = 0; i < conv_weights.size(); ++i) {
    const std::string prefix = "d.conv" + std::to_string(i);
    out.push_back({prefix + ".weight", conv_weights[i]});
    out.push_back({prefix + ".bn_gamma", bn_gamma[i]});
    out.push_back({prefix + ".bn_beta", bn_beta[i]});
    out.push_back({prefix + ".prelu", conv_slopes[i]});
  }
  for (std::size_t j = 0; j < fc_weights.size(); ++j) {
    const bool hidden = j < fc_slopes.size();
    const std::string prefix = hidden ? "d.fc" + std::to_string(j) : std::string("d.out");
    out.push_back({prefix + ".weight", fc_weights[j]});
    out.push_back({prefix + ".bias", fc_biases[j]});
    if (hidden) out.push_back({prefix + ".prelu", fc_slopes[j]});
  }
  return out;
}

std::vector<Tensor<float>> DiscriminatorParams::parameters() const {
  std::vector<Tensor<float>> out;
  for (auto& nt : named_parameters()) out.push_back(nt.tensor);
  return out;
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  const ShapePlan plan = shape_plan(config);
  std::mt19937_64 rng(seed);
  const std::size_t k = config.kernel;
  const float gain = 1.0f + kInitialSlope * kInitialSlope;

  // He-style uniform bound for a PReLU network.
  auto uniform = [&](Shape shape, double fan_in) {
    const float bound = static_cast<float>(std::sqrt(6.0 / (gain * fan_in)));
    std::uniform_real_distribution<float> dist(-bound, bound);
    Tensor<float> t(std::move(shape));
    for (auto& v : t.data()) v = dist(rng);
    t.set_requires_grad(true);
    return t;
  };
  auto constant = [](std::size_t n, float value) {
    Tensor<float> t(Shape{n}, value);
    t.set_requires_grad(true);
    return t;
  };

  ModelParams p;
  auto& gen = p.generator;
  for (const auto& l : plan.generator) {
    if (l.kind == LayerKind::kConv) {
      gen.encoder_weights.push_back(
          uniform({l.out_channels, l.in_channels, k}, double(l.in_channels * k)));
      gen.encoder_slopes.push_back(constant(l.out_channels, kInitialSlope));
    } else {
      gen.decoder_weights.push_back(uniform({l.in_channels, l.out_channels, k},
                                            double(l.in_channels * k) / double(l.stride)));
      if (l.activation == "prelu") gen.decoder_slopes.push_back(constant(l.out_channels, kInitialSlope));
    }
  }
  auto& disc = p.discriminator;
  for (const auto& l : plan.discriminator) {
    if (l.kind == LayerKind::kConv) {
      disc.conv_weights.push_back(
          uniform({l.out_channels, l.in_channels, k}, double(l.in_channels * k)));
      disc.bn_gamma.push_back(constant(l.out_channels, 1.0f));
      disc.bn_beta.push_back(constant(l.out_channels, 0.0f));
      disc.conv_slopes.push_back(constant(l.out_channels, kInitialSlope));
    } else {
      disc.fc_weights.push_back(uniform({l.out_channels, l.in_channels}, double(l.in_channels)));
      disc.fc_biases.push_back(constant(l.out_channels, 0.0f));
      if (l.activation == "prelu") disc.fc_slopes.push_back(constant(l.out_channels, kInitialSlope));
    }
  }
  return p;
}

void set_requires_grad(std::vector<Tensor<float>> params, bool flag) {
  for (auto& t : params) t.set_requires_grad(flag);
}

void zero_grad(std::vector<Tensor<float>> params) {
  for (auto& t : params) t.zero_grad();
}

Tensor<float> generator_forward(const ModelConfig& config, const GeneratorParams& params,
                                const Tensor<float>& coded, const Tensor<float>& z) {
  const std::size_t depth = config.encoder_depth();
  if (params.encoder_weights.size() != depth || params.decoder_weights.size() != depth) {
    throw ShapeError("generator_forward: parameters do not match the configured depth");
  }
  if (!coded.defined() || coded.rank() != 3 || coded.dim(1) != 1 ||
      coded.dim(2) != config.window) {
    throw ShapeError("generator_forward: input must be [N x 1 x " + std::to_string(config.window) +
                     "], got " + (coded.defined() ? to_string(coded.shape()) : "undefined"));
  }
  const Shape code_shape{coded.dim(0), config.code_channels(), config.code_length()};
  if (!z.defined() || z.shape() != code_shape) {
    throw ShapeError("generator_forward: z must have the code shape " + to_string(code_shape) +
                     ", got " + (z.defined() ? to_string(z.shape()) : "undefined"));
  }
  const std::size_t s = config.stride, pad = config.padding();

  std::vector<Tensor<float>> skips;
  Tensor<float> h = coded;
  for (std::size_t i = 0; i < depth; ++i) {
    h = prelu(conv1d(h, params.encoder_weights[i], s, pad), params.encoder_slopes[i]);
    if (i + 1 < depth) skips.push_back(h);
  }
  h = concat_channels(h, z);
  for (std::size_t j = 0; j < depth; ++j) {
    h = conv1d_transposed(h, params.decoder_weights[j], s, pad, config.output_padding());
    if (j + 1 < depth) {
      h = concat_channels(prelu(h, params.decoder_slopes[j]), skips[depth - 2 - j]);
    } else {
      h = tanh_act(h);
    }
  }
  return h;
}

Tensor<float> discriminator_forward(const ModelConfig& config, const DiscriminatorParams& params,
                                    const Tensor<float>& candidate, const Tensor<float>& coded) {
  if (!candidate.defined() || !coded.defined() || candidate.shape() != coded.shape() ||
      candidate.rank() != 3 || candidate.dim(1) != 1 || candidate.dim(2) != config.window) {
    throw ShapeError("discriminator_forward: candidate and coded must both be [N x 1 x " +
                     std::to_string(config.window) + "]");
  }
  const std::size_t n = candidate.dim(0);
  if (n < 2) {
    throw ShapeError("discriminator_forward: batch-norm needs a batch of at least 2, got " +
                     std::to_string(n));
  }
  const std::size_t s = config.stride, pad = config.padding();
  Tensor<float> h = concat_channels(candidate, coded);
  for (std::size_t i = 0; i < params.conv_weights.size(); ++i) {
    h = conv1d(h, params.conv_weights[i], s, pad);
    h = prelu(batchnorm1d(h, params.bn_gamma[i], params.bn_beta[i]), params.conv_slopes[i]);
  }
  h = reshape(h, {n, h.dim(1) * h.dim(2)});
  for (std::size_t j = 0; j < params.fc_weights.size(); ++j) {
    h = dense(h, params.fc_weights[j], params.fc_biases[j]);
    if (j < params.fc_slopes.size()) h = prelu(h, params.fc_slopes[j]);
  }
  return reshape(h, {n});
}

}  // namespace dcae
