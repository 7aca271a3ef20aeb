// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsgdm/experiment/config.hpp"
#include "tsgdm/lm/completion.hpp"
#include "tsgdm/optimizer/run.hpp"
#include "tsgdm/task/task.hpp"

namespace tsgdm::experiment {

// Scripted or remote backend, as configured. Caching is layered on per trial.
std::unique_ptr<lm::Backend> make_backend(const BackendConfig& config);

struct TrialOutcome {
  int index = 0;
  std::uint64_t seed = 0;
  bool completed = false;
  std::string error;
  // Partial on failure, when the run got far enough to produce one.
  std::optional<optimizer::RunResult> result;
  // Test accuracy of the best prompt; unset without a test split.
  std::optional<double> test_score;
  // test_score if present, otherwise the best holdout score.
  double final_metric = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  // Sample standard deviation; 0 for fewer than two values.
  double std = 0.0;
};

struct ExperimentSummary {
  std::string task;
  int trials = 0;
  int completed = 0;
  int failed = 0;
  MetricSummary best_holdout;
  MetricSummary final_metric;
  MetricSummary lm_calls;
  MetricSummary iterations;
  std::vector<std::string> warnings;
  std::vector<TrialOutcome> outcomes;

  bool all_completed() const { return failed == 0; }
};

nlohmann::json to_json(const ExperimentSummary& summary);

// Runs config.trials independent trials with seeds seed_base + i, writing
//   trial_<i>.json, run_log.jsonl, curves.csv, summary.json
// under config.output_dir. Trial failures are recorded, not thrown.
//
// With caching enabled each trial uses its own cache file
// <cache_dir>/trial_<seed>.jsonl; in replay mode `backend` is never called.
ExperimentSummary run_experiment(const ExperimentConfig& config, const task::TaskBinding& task,
                                 lm::Backend& backend, std::ostream* progress = nullptr);

struct SweepPoint {
  double value = 0.0;
  ExperimentSummary summary;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kBatchSize;
  std::vector<SweepPoint> points;

  bool all_completed() const;
};

// One experiment per sweep value (ascending), each in its own subdirectory
// of config.output_dir and of the cache directory. Writes sweep.csv and
// sweep.json alongside. Throws ConfigError if config.sweep is unset.
SweepResult run_sweep(const ExperimentConfig& config, const task::TaskBinding& task,
                      lm::Backend& backend, std::ostream* progress = nullptr);

// Shortest round-trip decimal form, used in directory names and tables.
std::string format_number(double value);

}  // namespace tsgdm::experiment
