// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsgdm/lm/remote_backend.hpp"
#include "tsgdm/lm/replay_cache.hpp"
#include "tsgdm/optimizer/params.hpp"
#include "tsgdm/task/task.hpp"

namespace tsgdm::experiment {

// A split is either a dataset file or inline examples.
using SplitSource = std::variant<std::filesystem::path, std::vector<task::LabeledExample>>;

struct TaskSource {
  std::string name;
  task::ScoreKind kind = task::ScoreKind::kClassificationAccuracy;
  std::vector<std::string> label_set;
  std::string initial_prompt;
  // An empty path means "not given"; load_task rejects it.
  SplitSource train;
  SplitSource holdout;
  std::optional<SplitSource> test;
};

enum class BackendKind { kScripted, kRemote };

struct BackendConfig {
  BackendKind kind = BackendKind::kScripted;
  nlohmann::json scripted = nlohmann::json::object();
  lm::RemoteConfig remote;
  // Unset disables caching.
  std::optional<lm::CacheMode> cache_mode;
  std::filesystem::path cache_dir;
  // Per-trial gateway call budget.
  std::optional<std::int64_t> max_gateway_calls;
  std::size_t score_workers = 1;
};

enum class SweepAxis { kBatchSize, kTrainSize, kAlpha, kTemperature };

std::string_view to_string(SweepAxis axis);

struct Sweep {
  SweepAxis axis = SweepAxis::kBatchSize;
  std::vector<double> values;
};

struct ExperimentConfig {
  optimizer::RunConfig run;
  TaskSource task;
  BackendConfig backend;
  int trials = 1;
  std::uint64_t seed_base = 0;
  std::optional<Sweep> sweep;
  std::filesystem::path output_dir = "tsgdm_out";
};

// Parses a JSON config document. Unspecified fields take the defaults
// (T = 20, T_max = 100, k = 20, m = 20, block 10, preset H0). A preset
// fixes temperature and patience; setting either to a different value
// alongside H0/H1 is a ConfigError.
//
// Throws ConfigError naming the offending field, and in strict mode
// UnknownFieldError for keys outside the schema.
ExperimentConfig parse_config(std::string_view text, bool strict = true);
ExperimentConfig parse_config(const nlohmann::json& doc, bool strict = true);
inline ExperimentConfig parse_config(const char* text, bool strict = true) {
  return parse_config(std::string_view(text), strict);
}
inline ExperimentConfig parse_config(const std::string& text, bool strict = true) {
  return parse_config(std::string_view(text), strict);
}

// Resolves a task source (loading files) into a validated binding.
task::TaskBinding load_task(const TaskSource& source);

// Applies a sweep value to a copy of `config`.
ExperimentConfig with_axis_value(const ExperimentConfig& config, SweepAxis axis, double value);

}  // namespace tsgdm::experiment
