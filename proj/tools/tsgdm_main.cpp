// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0
//
// tsgdm: run, sweep and variance subcommands.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsgdm/common/error.hpp"
#include "tsgdm/common/random.hpp"
#include "tsgdm/experiment/config.hpp"
#include "tsgdm/experiment/experiment.hpp"
#include "tsgdm/variance/ema.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tsgdm;

constexpr int kExitTrialFailed = 1;
constexpr int kExitUsage = 2;

// Command-line values that override the config document.
struct Overrides {
  std::optional<int> trials;
  std::optional<std::uint64_t> seed_base;
  std::optional<std::string> output_dir;
  std::optional<std::string> preset;
  std::optional<std::string> mode;
  std::optional<int> iterations;
  std::optional<int> batch_size;
  std::optional<int> train_size;
  std::optional<int> patience;
  std::optional<double> alpha;
  std::optional<double> temperature;
  std::optional<int> candidates;
  std::optional<int> max_tokens;
  std::optional<int> block_tokens;
  bool no_momentum = false;
  std::optional<std::string> cache_mode;
  std::optional<std::string> cache_dir;
  std::optional<std::int64_t> max_calls;
  std::optional<std::string> sweep_axis;
  std::vector<double> sweep_values;
  bool lenient = false;
};

void add_override_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--trials", o.trials, "Number of trials");
  cmd.add_option("--seed-base", o.seed_base, "Seed of trial 0; trial i uses seed_base + i");
  cmd.add_option("--output-dir", o.output_dir, "Report directory");
  cmd.add_option("--preset", o.preset, "H0, H1 or custom");
  cmd.add_option("--mode", o.mode, "case1_meta_prompt, case2_gradient or concat_baseline");
  cmd.add_option("--iterations", o.iterations, "Total iterations T");
  cmd.add_option("--batch-size", o.batch_size, "Batch size m");
  cmd.add_option("--train-size", o.train_size, "Training subset size N");
  cmd.add_option("--patience", o.patience, "Early-stopping patience (preset custom)");
  cmd.add_option("--alpha", o.alpha, "Momentum decay in [0, 1]");
  cmd.add_option("--temperature", o.temperature, "Generation temperature (preset custom)");
  cmd.add_option("--candidates", o.candidates, "Candidates per iteration k");
  cmd.add_option("--max-tokens", o.max_tokens, "Token budget per candidate");
  cmd.add_option("--block-tokens", o.block_tokens, "Tokens per momentum draw");
  cmd.add_flag("--no-momentum", o.no_momentum, "Vanilla update instead of momentum");
  cmd.add_option("--cache-mode", o.cache_mode, "record, replay or passthrough");
  cmd.add_option("--cache-dir", o.cache_dir, "Directory for per-trial cache files");
  cmd.add_option("--max-calls", o.max_calls, "Per-trial gateway call budget");
  cmd.add_flag("--lenient", o.lenient, "Ignore unknown config fields");
}

void apply_overrides(json& doc, const Overrides& o) {
  if (o.trials) doc["trials"] = *o.trials;
  if (o.seed_base) doc["seed_base"] = *o.seed_base;
  if (o.output_dir) doc["output_dir"] = *o.output_dir;
  json& run = doc["run"];
  if (run.is_null()) run = json::object();
  if (o.preset) run["preset"] = *o.preset;
  if (o.iterations) run["total_iterations"] = *o.iterations;
  if (o.batch_size) run["batch_size"] = *o.batch_size;
  if (o.train_size) run["train_size"] = *o.train_size;
  if (o.patience) run["patience"] = *o.patience;
  if (o.no_momentum) run["use_momentum"] = false;
  json& gen = run["generation"];
  if (gen.is_null()) gen = json::object();
  if (o.mode) gen["mode"] = *o.mode;
  if (o.alpha) gen["alpha"] = *o.alpha;
  if (o.temperature) gen["temperature"] = *o.temperature;
  if (o.candidates) gen["candidates"] = *o.candidates;
  if (o.max_tokens) gen["max_total_tokens"] = *o.max_tokens;
  if (o.block_tokens) gen["block_tokens"] = *o.block_tokens;
  if (gen.empty()) run.erase("generation");
  if (run.empty()) doc.erase("run");
  if (o.cache_mode || o.cache_dir || o.max_calls) {
    json& backend = doc["backend"];
    if (backend.is_null()) backend = json::object();
    if (o.cache_mode) backend["cache"]["mode"] = *o.cache_mode;
    if (o.cache_dir) backend["cache"]["dir"] = *o.cache_dir;
    if (o.max_calls) backend["max_gateway_calls"] = *o.max_calls;
  }
  if (o.sweep_axis) doc["sweep"]["axis"] = *o.sweep_axis;
  if (!o.sweep_values.empty()) doc["sweep"]["values"] = o.sweep_values;
}

// Relative dataset and cache paths resolve against the config file.
void resolve_paths(experiment::ExperimentConfig& config, const fs::path& base) {
  auto fix = [&](experiment::SplitSource& split) {
    if (auto* p = std::get_if<fs::path>(&split); p && !p->empty() && p->is_relative()) {
      *p = base / *p;
    }
  };
  fix(config.task.train);
  fix(config.task.holdout);
  if (config.task.test) fix(*config.task.test);
  if (!config.backend.cache_dir.empty() && config.backend.cache_dir.is_relative()) {
    config.backend.cache_dir = base / config.backend.cache_dir;
  }
}

experiment::ExperimentConfig load_config(const std::string& path, const Overrides& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
  }
  apply_overrides(doc, o);
  auto config = experiment::parse_config(doc, !o.lenient);
  resolve_paths(config, fs::path(path).parent_path());
  return config;
}

int cmd_run(const std::string& path, const Overrides& o) {
  auto config = load_config(path, o);
  const auto task = experiment::load_task(config.task);
  auto backend = experiment::make_backend(config.backend);
  const auto summary = experiment::run_experiment(config, task, *backend, &std::cerr);
  std::cout << to_json(summary).dump(2) << '\n';
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
  return summary.all_completed() ? 0 : kExitTrialFailed;
}

int cmd_sweep(const std::string& path, const Overrides& o) {
  auto config = load_config(path, o);
  if (!config.sweep) throw ConfigError("sweep", "required for the sweep subcommand");
  const auto task = experiment::load_task(config.task);
  auto backend = experiment::make_backend(config.backend);
  const auto result = experiment::run_sweep(config, task, *backend, &std::cerr);
  std::cout << std::ifstream(config.output_dir / "sweep.csv").rdbuf();
  return result.all_completed() ? 0 : kExitTrialFailed;
}

struct VarianceArgs {
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::size_t> horizons{1, 2, 5, 10, 20, 50};
  double sigma = 1.0;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string output_dir;
};

int cmd_variance(const VarianceArgs& a) {
  variance::SimulationOptions options;
  options.workers = a.workers;
  const auto report =
      variance::variance_report(a.alphas, a.horizons, a.sigma, a.trials, RandomStream(a.seed),
                                options);
  variance::write_csv(report, std::cout);
  if (!a.output_dir.empty()) {
    fs::create_directories(a.output_dir);
    std::ofstream csv(fs::path(a.output_dir) / "variance.csv", std::ios::binary);
    variance::write_csv(report, csv);
    std::ofstream(fs::path(a.output_dir) / "variance_summary.json", std::ios::binary)
        << variance::summary_json(report).dump(2) << '\n';
  }
  if (report.flagged_count() > 0) {
    std::cerr << report.flagged_count() << " cell(s) deviate from theory beyond "
              << report.flag_sigmas << " standard errors\n";
  }
  return 0;
}

void print_error(const std::exception& e, int depth = 0) {
  std::cerr << (depth == 0 ? "error: " : "  caused by: ") << e.what() << '\n';
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_error(inner, depth + 1);
  } catch (...) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prompt optimization with textual gradients and momentum"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;

  auto* run = app.add_subcommand("run", "Run the configured experiment");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_override_flags(*run, overrides);

  auto* sweep = app.add_subcommand("sweep", "Run one experiment per sweep value");
  sweep->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_override_flags(*sweep, overrides);
  sweep->add_option("--axis", overrides.sweep_axis, "batch_size, train_size, alpha or temperature");
  sweep->add_option("--values", overrides.sweep_values, "Sweep values")->delimiter(',');

  VarianceArgs vargs;
  auto* var = app.add_subcommand("variance", "Simulate the moving-average variance grid");
  var->add_option("--alphas", vargs.alphas, "Mixing weights in (0, 1]")->delimiter(',');
  var->add_option("--horizons", vargs.horizons, "Horizons t")->delimiter(',');
  var->add_option("--sigma", vargs.sigma, "Noise standard deviation");
  var->add_option("--trials", vargs.trials, "Trials per cell");
  var->add_option("--seed", vargs.seed, "Master seed");
  var->add_option("--workers", vargs.workers, "Worker threads");
  var->add_option("--output-dir", vargs.output_dir, "Also write variance.csv and a summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, overrides);
    if (*sweep) return cmd_sweep(config_path, overrides);
    return cmd_variance(vargs);
  } catch (const ConfigError& e) {
    print_error(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    print_error(e);
    return kExitTrialFailed;
  }
}
