// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace dcae {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O writes host floats directly and assumes little-endian");

namespace {

constexpr std::array<char, 4> kMagic{'D', 'C', 'A', 'E'};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw CheckpointError(CheckpointError::Kind::kIo, "cannot open " + path.string() + " for writing");
  }

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out_) throw CheckpointError(CheckpointError::Kind::kIo, "write failed on " + path_.string());
  }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void text(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void tensor(const std::string& name, const Tensor<float>& t) {
    text(name);
    u32(static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) u32(static_cast<std::uint32_t>(d));
    bytes(t.data().data(), t.numel() * sizeof(float));
  }
  void close() {
    out_.close();
    if (!out_) throw CheckpointError(CheckpointError::Kind::kIo, "close failed on " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw CheckpointError(CheckpointError::Kind::kIo, "cannot open " + path.string());
  }

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw CheckpointError(CheckpointError::Kind::kTruncated,
                            path_.string() + ": checkpoint is truncated");
    }
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    bytes(&v, sizeof v);
    return v;
  }
  std::string text() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  // Reads one tensor record and checks it against the expected slot.
  void tensor_into(const std::string& expected_name, Tensor<float>& dst) {
    const std::string name = text();
    const std::uint32_t rank = u32();
    if (rank > 8) {
      throw CheckpointError(CheckpointError::Kind::kShapeMismatch,
                            path_.string() + ": implausible rank " + std::to_string(rank) +
                                " for " + name);
    }
    Shape shape(rank);
    for (auto& d : shape) d = u32();
    if (name != expected_name || shape != dst.shape()) {
      throw CheckpointError(CheckpointError::Kind::kShapeMismatch,
                            path_.string() + ": expected " + expected_name + " " +
                                to_string(dst.shape()) + ", found " + name + " " +
                                to_string(shape));
    }
    bytes(dst.data().data(), dst.numel() * sizeof(float));
  }
  bool at_end() { return in_.peek() == std::ifstream::traits_type::eof(); }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
};

struct Slot {
  std::string name;
  Tensor<float> tensor;
};

std::vector<Slot> parameter_slots(const ModelParams& params) {
  std::vector<Slot> slots;
  for (auto& nt : params.generator.named_parameters()) slots.push_back({nt.name, nt.tensor});
  for (auto& nt : params.discriminator.named_parameters()) slots.push_back({nt.name, nt.tensor});
  return slots;
}

std::vector<Slot> optimizer_slots(const ModelParams& params, const TrainState& state) {
  std::vector<Slot> slots;
  const auto g = params.generator.named_parameters();
  const auto d = params.discriminator.named_parameters();
  if (state.generator_opt.accumulators.size() != g.size() ||
      state.discriminator_opt.accumulators.size() != d.size()) {
    throw CheckpointError(CheckpointError::Kind::kShapeMismatch,
                          "optimizer state does not match the parameter list");
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    slots.push_back({"opt.g." + g[i].name, state.generator_opt.accumulators[i]});
  for (std::size_t i = 0; i < d.size(); ++i)
    slots.push_back({"opt.d." + d[i].name, state.discriminator_opt.accumulators[i]});
  return slots;
}

nlohmann::json state_json(const TrainState& s) {
  std::ostringstream rng;
  rng << s.rng;
  return {{"epoch", s.epoch},
          {"step", s.step},
          {"lambda", s.lambda},
          {"rng", rng.str()},
          {"generator_rho", s.generator_opt.rho},
          {"generator_epsilon", s.generator_opt.epsilon},
          {"discriminator_rho", s.discriminator_opt.rho},
          {"discriminator_epsilon", s.discriminator_opt.epsilon}};
}

void apply_state_json(const nlohmann::json& j, TrainState& s) {
  s.epoch = j.at("epoch").get<std::size_t>();
  s.step = j.at("step").get<std::size_t>();
  s.lambda = j.at("lambda").get<double>();
  std::istringstream rng(j.at("rng").get<std::string>());
  rng >> s.rng;
  if (!rng) throw std::invalid_argument("bad rng state");
  s.generator_opt.rho = j.at("generator_rho").get<float>();
  s.generator_opt.epsilon = j.at("generator_epsilon").get<float>();
  s.discriminator_opt.rho = j.at("discriminator_rho").get<float>();
  s.discriminator_opt.epsilon = j.at("discriminator_epsilon").get<float>();
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& config,
                     const ModelParams& params, const TrainState& state) {
  const auto slots = parameter_slots(params);
  const auto opt = optimizer_slots(params, state);
  // Write-then-rename so an interrupted save never leaves a partial file
  // under the final name.
  auto tmp = path;
  tmp += ".tmp";
  {
    Writer w(tmp);
    w.bytes(kMagic.data(), kMagic.size());
    w.u32(kCheckpointVersion);
    w.text(to_json(config).dump());
    w.u32(static_cast<std::uint32_t>(slots.size()));
    for (const auto& s : slots) w.tensor(s.name, s.tensor);
    w.text(state_json(state).dump());
    w.u32(static_cast<std::uint32_t>(opt.size()));
    for (const auto& s : opt) w.tensor(s.name, s.tensor);
    w.close();
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw CheckpointError(CheckpointError::Kind::kIo,
                          "cannot move checkpoint into place at " + path.string() + ": " +
                              ec.message());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  Reader r(path);
  std::array<char, 4> magic{};
  try {
    r.bytes(magic.data(), magic.size());
  } catch (const CheckpointError&) {
    throw CheckpointError(CheckpointError::Kind::kBadMagic, path.string() + ": not a DCAE checkpoint");
  }
  if (magic != kMagic) {
    throw CheckpointError(CheckpointError::Kind::kBadMagic, path.string() + ": not a DCAE checkpoint");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw CheckpointError(CheckpointError::Kind::kVersion,
                          path.string() + ": checkpoint version " + std::to_string(version) +
                              " is not supported (expected " +
                              std::to_string(kCheckpointVersion) + ")");
  }

  Checkpoint ck;
  try {
    ck.config = model_config_from_json(nlohmann::json::parse(r.text()));
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(CheckpointError::Kind::kConfigMismatch,
                          path.string() + ": embedded config is invalid: " + e.what());
  }

  ck.params = init_params(ck.config, 0);
  auto slots = parameter_slots(ck.params);
  const std::uint32_t count = r.u32();
  if (count != slots.size()) {
    throw CheckpointError(CheckpointError::Kind::kShapeMismatch,
                          path.string() + ": holds " + std::to_string(count) +
                              " parameter tensors, config implies " +
                              std::to_string(slots.size()));
  }
  for (auto& s : slots) r.tensor_into(s.name, s.tensor);

  ck.state = TrainState::initial(ck.config, ck.params, 0);
  try {
    apply_state_json(nlohmann::json::parse(r.text()), ck.state);
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(CheckpointError::Kind::kShapeMismatch,
                          path.string() + ": train state is invalid: " + e.what());
  }
  auto opt = optimizer_slots(ck.params, ck.state);
  const std::uint32_t opt_count = r.u32();
  if (opt_count != opt.size()) {
    throw CheckpointError(CheckpointError::Kind::kShapeMismatch,
                          path.string() + ": holds " + std::to_string(opt_count) +
                              " optimizer tensors, expected " + std::to_string(opt.size()));
  }
  for (auto& s : opt) r.tensor_into(s.name, s.tensor);
  if (!r.at_end()) {
    throw CheckpointError(CheckpointError::Kind::kShapeMismatch,
                          path.string() + ": trailing bytes after the last record");
  }
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const ModelConfig& expected) {
  Checkpoint ck = load_checkpoint(path);
  const auto& c = ck.config;
  if (c.variant != expected.variant || c.generator_channels != expected.generator_channels ||
      c.discriminator_channels != expected.discriminator_channels ||
      c.discriminator_fc_hidden != expected.discriminator_fc_hidden ||
      c.kernel != expected.kernel || c.window != expected.window) {
    throw CheckpointError(CheckpointError::Kind::kConfigMismatch,
                          path.string() + ": checkpoint holds a " + to_string(c.variant) +
                              " model that does not match the requested " +
                              to_string(expected.variant) + " configuration");
  }
  return ck;
}

}  // namespace dcae
