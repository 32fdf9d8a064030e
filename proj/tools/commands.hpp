// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_TOOLS_COMMANDS_HPP_
#define DCAE_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcae/model.hpp"

namespace dcae::cli {

// Exit codes are a stable scripting contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// Contents of a --config file. Relative paths are resolved against the
// directory holding the config file.
struct RunConfig {
  ModelConfig model;
  std::filesystem::path original_dir;
  std::filesystem::path coded_dir;
  std::uint64_t seed = 0;
  std::filesystem::path checkpoint_dir;
  std::optional<std::filesystem::path> resume;
};

// Strict parse: unknown keys or missing required keys raise ConfigError.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);
// Accepts either a run config or a bare model config.
ModelConfig load_model_config(const std::filesystem::path& path);

struct EnhanceOptions {
  std::filesystem::path model;
  std::filesystem::path input;
  std::filesystem::path output;
  std::uint64_t seed = 0;
};

struct DegradeOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  double bandwidth_hz = 7200.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

struct EvalOptions {
  std::filesystem::path ref;
  std::filesystem::path deg;
  std::optional<std::filesystem::path> spectrogram;
};

struct InitOptions {
  std::filesystem::path config;
  std::filesystem::path output;
  std::uint64_t seed = 0;
};

int cmd_train(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_enhance(const EnhanceOptions& opts, std::ostream& out, std::ostream& err);
int cmd_degrade(const DegradeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_shapes(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_init(const InitOptions& opts, std::ostream& out, std::ostream& err);

// Full command line (argv[0] excluded) -> exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dcae::cli

#endif  // DCAE_TOOLS_COMMANDS_HPP_
