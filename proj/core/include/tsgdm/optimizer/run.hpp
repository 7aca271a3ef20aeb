// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsgdm/common/error.hpp"
#include "tsgdm/lm/completion.hpp"
#include "tsgdm/optimizer/history.hpp"
#include "tsgdm/optimizer/params.hpp"
#include "tsgdm/task/score.hpp"
#include "tsgdm/task/task.hpp"

namespace tsgdm::optimizer {

enum class StopReason { kMaxIterations, kEarlyStopped };

std::string_view to_string(StopReason reason);

// Entry i describes prompt p_i. Entry 0 is the initial prompt.
struct IterationLog {
  std::size_t iteration = 0;
  std::string selected_prompt;
  double holdout_score = 0.0;
  std::vector<double> candidate_scores;
  // Unset for the initial prompt.
  std::optional<std::size_t> selected_candidate;
  std::int64_t lm_calls_cumulative = 0;
  std::int64_t tokens_cumulative = 0;

  friend bool operator==(const IterationLog&, const IterationLog&) = default;
};

struct RunResult {
  std::string best_prompt;
  double best_score = 0.0;
  std::size_t best_iteration = 0;
  std::vector<IterationLog> per_iteration;
  StopReason stop_reason = StopReason::kMaxIterations;
  std::int64_t total_lm_calls = 0;
  std::int64_t total_tokens = 0;
  std::vector<PromptRecord> history;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

void to_json(nlohmann::json& j, const IterationLog& log);
void to_json(nlohmann::json& j, const RunResult& result);

// Thrown when a run fails part-way. The original exception is nested
// (std::rethrow_if_nested) and partial() holds everything logged so far.
class RunError : public Error {
 public:
  RunError(const std::string& what, RunResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const RunResult& partial() const noexcept { return partial_; }

 private:
  RunResult partial_;
};

using IterationCallback = std::function<void(const IterationLog&)>;

// The outer optimization loop.
//
// p_0 is scored on the holdout set first. Iteration t then samples a batch
// from the training pool, predicts it with p_t at temperature 0, computes
// the textual gradient in gradient mode, appends record t to the history
// and produces p_{t+1} with the momentum, plain or concatenation update.
// p_{t+1}'s holdout score is the winning candidate score when k > 1, and a
// fresh holdout evaluation when k = 1.
//
// The loop ends after config.total_iterations iterations, or earlier once
// the best holdout score has gone `patience` consecutive iterations without
// strictly improving. The best prompt is the earliest one with the highest
// holdout score, p_0 included.
//
// All randomness derives from config.seed. `holdout` must score on the
// holdout split; its usage() is added to the run's gateway totals.
RunResult run_tsgd(const RunConfig& config, const task::TaskBinding& task, lm::Backend& lm,
                   task::ScoreFunction& holdout, const IterationCallback& on_iteration = {});

}  // namespace tsgdm::optimizer
