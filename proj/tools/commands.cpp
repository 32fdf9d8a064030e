// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>

#include "CLI11.hpp"

#include "dcae/audio.hpp"
#include "dcae/checkpoint.hpp"
#include "dcae/dataset.hpp"
#include "dcae/metrics.hpp"
#include "dcae/train.hpp"
#include "dcae/wav.hpp"

namespace dcae::cli {

namespace fs = std::filesystem;

namespace {

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

fs::path resolve(const fs::path& base, const nlohmann::json& value, const char* key) {
  if (!value.is_string()) throw ConfigError(std::string(key) + ": expected a path string");
  fs::path p = value.get<std::string>();
  return p.is_absolute() ? p : base / p;
}

// Maps library exceptions onto the exit-code contract.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const NonFiniteLossError& e) {
    err << "error: training aborted: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DatasetError& e) {
    err << "error: dataset: " << e.what() << '\n';
    return kExitUsage;
  } catch (const WavError& e) {
    err << "error: wav: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CheckpointError& e) {
    err << "error: checkpoint: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("run config: expected a JSON object");
  static const std::set<std::string> known{"model", "original_dir", "coded_dir", "seed",
                                           "checkpoint_dir", "resume"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(key + ": unknown key");
  }
  for (const char* key : {"model", "original_dir", "coded_dir", "seed", "checkpoint_dir"}) {
    if (!j.contains(key)) throw ConfigError(std::string(key) + ": missing required key");
  }
  RunConfig rc;
  rc.model = model_config_from_json(j.at("model"));
  TrainRecipe::from_config(rc.model).validate();
  rc.original_dir = resolve(base_dir, j.at("original_dir"), "original_dir");
  rc.coded_dir = resolve(base_dir, j.at("coded_dir"), "coded_dir");
  rc.checkpoint_dir = resolve(base_dir, j.at("checkpoint_dir"), "checkpoint_dir");
  if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
  rc.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("resume") && !j.at("resume").is_null()) {
    rc.resume = resolve(base_dir, j.at("resume"), "resume");
  }
  return rc;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_json(path), path.parent_path());
}

ModelConfig load_model_config(const fs::path& path) {
  const auto j = read_json(path);
  if (j.is_object() && j.contains("model")) return parse_run_config(j, path.parent_path()).model;
  return model_config_from_json(j);
}

int cmd_train(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load_run_config(config_path);
    for (const auto& dir : {rc.original_dir, rc.coded_dir}) {
      if (!fs::is_directory(dir)) throw ConfigError("dataset directory not found: " + dir.string());
    }
    const PairedDataset dataset = pair_dataset(rc.original_dir, rc.coded_dir, rc.model.window);
    dataset.write_skip_report(out);
    out << "dataset: " << dataset.pairs().size() << " pairs, " << dataset.chunks().size()
        << " windows\n";

    std::optional<Trainer> trainer;
    if (rc.resume) {
      Checkpoint ck = load_checkpoint(*rc.resume, rc.model);
      out << "resuming from " << rc.resume->string() << " at epoch " << ck.state.epoch << '\n';
      trainer.emplace(rc.model, std::move(ck.params), std::move(ck.state));
    } else {
      trainer.emplace(Trainer::fresh(rc.model, rc.seed));
    }
    const fs::path final_path = train(*trainer, dataset, rc.seed, rc.checkpoint_dir, out);
    out << "final checkpoint: " << final_path.string() << '\n';
    return kExitOk;
  });
}

int cmd_enhance(const EnhanceOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Checkpoint ck = load_checkpoint(opts.model);
    const ModelConfig& config = ck.config;
    const AudioClip input = read_wav(opts.input);

    const auto start = std::chrono::steady_clock::now();
    std::vector<float> signal =
        config.preemphasis ? preemphasis<float>(input.samples) : input.samples;
    InferenceChunks chunks = chunk_inference(signal, config.window);

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    NoGradGuard no_grad;
    for (auto& window : chunks.windows) {
      Tensor<float> coded(Shape{1, 1, config.window}, window);
      Tensor<float> z(Shape{1, config.code_channels(), config.code_length()});
      for (auto& v : z.data()) v = gauss(rng);
      const auto enhanced = generator_forward(config, ck.params.generator, coded, z);
      std::copy(enhanced.data().begin(), enhanced.data().end(), window.begin());
    }
    std::vector<float> result = assemble(chunks.windows, chunks.original_length);
    if (config.preemphasis) result = deemphasis<float>(result);
    const double elapsed = seconds_since(start);

    write_wav(opts.output, AudioClip{std::move(result), kSampleRate});
    out << "enhanced " << input.samples.size() << " samples (" << input.seconds() << " s) in "
        << elapsed << " s\n";
    if (input.samples.empty()) {
      out << "rtf n/a (empty input)\n";
    } else {
      out << "rtf " << std::fixed << std::setprecision(3)
          << rtf(input.seconds(), std::max(elapsed, 1e-9)) << '\n';
      out << std::defaultfloat;
    }
    return kExitOk;
  });
}

int cmd_degrade(const DegradeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const AudioClip input = read_wav(opts.input);
    const AudioClip coded = degrade(input, opts.bandwidth_hz, opts.noise, opts.seed);
    write_wav(opts.output, coded);
    out << "degraded " << input.samples.size() << " samples: bandwidth " << opts.bandwidth_hz
        << " Hz, noise " << opts.noise << ", seed " << opts.seed << '\n';
    return kExitOk;
  });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    AudioClip ref = read_wav(opts.ref);
    AudioClip deg = read_wav(opts.deg);
    if (ref.samples.size() != deg.samples.size()) {
      const std::size_t n = std::min(ref.samples.size(), deg.samples.size());
      out << "note: lengths " << ref.samples.size() << " and " << deg.samples.size()
          << " truncated to " << n << '\n';
      ref.samples.resize(n);
      deg.samples.resize(n);
    }
    EvalReport report;
    report.entries.push_back({opts.deg.filename().string(), deg.samples.size(),
                              segmental_snr(ref.samples, deg.samples),
                              log_spectral_distance(ref.samples, deg.samples), std::nullopt});
    report.write_tsv(out);
    out << report.to_json().dump() << '\n';
    if (opts.spectrogram) {
      std::ofstream csv(*opts.spectrogram);
      if (!csv) throw std::runtime_error("cannot write " + opts.spectrogram->string());
      write_spectrogram_csv(csv, deg.samples);
    }
    return kExitOk;
  });
}

int cmd_shapes(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelConfig config = load_model_config(config_path);
    const ShapePlan plan = shape_plan(config);
    auto row = [&](const LayerDescriptor& l) {
      out << std::left << std::setw(10) << l.name << std::setw(7) << to_string(l.kind)
          << std::right << std::setw(7) << l.in_channels << std::setw(7) << l.out_channels
          << std::setw(8) << l.in_length << std::setw(8) << l.out_length << "  " << std::left
          << std::setw(9) << l.activation << std::right << std::setw(11) << l.parameter_count
          << '\n';
    };
    out << "variant " << to_string(config.variant) << ", stride " << config.stride
        << ", kernel " << config.kernel << ", window " << config.window << '\n';
    out << std::left << std::setw(10) << "layer" << std::setw(7) << "kind" << std::right
        << std::setw(7) << "c_in" << std::setw(7) << "c_out" << std::setw(8) << "l_in"
        << std::setw(8) << "l_out" << "  " << std::left << std::setw(9) << "act" << std::right
        << std::setw(11) << "params" << '\n';
    out << "generator (" << plan.generator.size() << " layers)\n";
    for (const auto& l : plan.generator) row(l);
    out << "code " << plan.code_channels << "x" << plan.code_length << ", latent "
        << plan.latent_channels << "x" << plan.code_length << '\n';
    std::size_t convs = 0;
    for (const auto& l : plan.discriminator) convs += l.kind == LayerKind::kConv;
    out << "discriminator (" << convs << " conv layers, "
        << plan.discriminator.size() - convs << " dense layers, flatten "
        << plan.discriminator_flatten << ")\n";
    for (const auto& l : plan.discriminator) row(l);
    out << "generator parameters " << plan.generator_parameters() << '\n';
    out << "discriminator parameters " << plan.discriminator_parameters() << '\n';
    out << "total parameters "
        << plan.generator_parameters() + plan.discriminator_parameters() << '\n';
    return kExitOk;
  });
}

int cmd_init(const InitOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelConfig config = load_model_config(opts.config);
    const ModelParams params = init_params(config, opts.seed);
    save_checkpoint(opts.output, config, params, TrainState::initial(config, params, opts.seed));
    out << "wrote " << to_string(config.variant) << " checkpoint " << opts.output.string()
        << '\n';
    return kExitOk;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DCAE coded-audio enhancer: train, enhance, degrade, evaluate"};
  app.require_subcommand(1);

  std::string train_config;
  auto* train_cmd = app.add_subcommand("train", "Train a generator/discriminator pair");
  train_cmd->add_option("--config", train_config, "Run config JSON")->required();

  std::string enh_model, enh_in, enh_out;
  std::uint64_t enh_seed = 0;
  auto* enhance_cmd = app.add_subcommand("enhance", "Enhance a coded 16 kHz mono WAV");
  enhance_cmd->add_option("--model", enh_model, "Checkpoint")->required();
  enhance_cmd->add_option("--in", enh_in, "Input WAV")->required();
  enhance_cmd->add_option("--out", enh_out, "Output WAV")->required();
  enhance_cmd->add_option("--seed", enh_seed, "Seed for the latent noise");

  DegradeOptions deg;
  std::string deg_in, deg_out;
  auto* degrade_cmd = app.add_subcommand("degrade", "Band-limit and add coding-like noise");
  degrade_cmd->add_option("--in", deg_in, "Input WAV")->required();
  degrade_cmd->add_option("--out", deg_out, "Output WAV")->required();
  degrade_cmd->add_option("--bandwidth", deg.bandwidth_hz, "Bandwidth in Hz")->required();
  degrade_cmd->add_option("--noise", deg.noise, "Noise level relative to band RMS")->required();
  degrade_cmd->add_option("--seed", deg.seed, "Noise seed")->required();

  std::string eval_ref, eval_deg, eval_spec;
  auto* eval_cmd = app.add_subcommand("eval", "Objective metrics of a file against a reference");
  eval_cmd->add_option("--ref", eval_ref, "Reference WAV")->required();
  eval_cmd->add_option("--deg", eval_deg, "Processed WAV")->required();
  eval_cmd->add_option("--spectrogram", eval_spec, "Write the processed file's spectrogram CSV");

  std::string shapes_config;
  auto* shapes_cmd = app.add_subcommand("shapes", "Print the layer plan of a config");
  shapes_cmd->add_option("--config", shapes_config, "Run or model config JSON")->required();

  InitOptions init;
  std::string init_config, init_out;
  auto* init_cmd = app.add_subcommand("init", "Write a freshly initialised checkpoint");
  init_cmd->add_option("--config", init_config, "Run or model config JSON")->required();
  init_cmd->add_option("--out", init_out, "Checkpoint path")->required();
  init_cmd->add_option("--seed", init.seed, "Initialisation seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*train_cmd) return cmd_train(train_config, out, err);
  if (*enhance_cmd) return cmd_enhance({enh_model, enh_in, enh_out, enh_seed}, out, err);
  if (*degrade_cmd) {
    deg.input = deg_in;
    deg.output = deg_out;
    return cmd_degrade(deg, out, err);
  }
  if (*eval_cmd) {
    EvalOptions opts{eval_ref, eval_deg, std::nullopt};
    if (!eval_spec.empty()) opts.spectrogram = eval_spec;
    return cmd_eval(opts, out, err);
  }
  if (*shapes_cmd) return cmd_shapes(shapes_config, out, err);
  if (*init_cmd) {
    init.config = init_config;
    init.output = init_out;
    return cmd_init(init, out, err);
  }
  return kExitUsage;
}

}  // namespace dcae::cli
