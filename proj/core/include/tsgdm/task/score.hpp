// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tsgdm/lm/completion.hpp"
#include "tsgdm/lm/metered_backend.hpp"
#include "tsgdm/task/forward.hpp"
#include "tsgdm/task/task.hpp"

namespace tsgdm::task {

// Maps a prompt to a quality score in [0, 1]. Used both for candidate
// selection and for holdout tracking.
class ScoreFunction {
 public:
  virtual ~ScoreFunction() = default;
  virtual double score(const std::string& prompt) = 0;
  // Gateway usage so far, for run accounting.
  virtual lm::UsageSnapshot usage() const { return {}; }
};

struct ScoreOptions {
  ScoreKind kind = ScoreKind::kClassificationAccuracy;
  std::vector<std::string> label_set;
  int max_new_tokens = 16;
  // Concurrent gateway calls; 1 evaluates sequentially.
  std::size_t workers = 1;
  const TemplateText* forward_template = nullptr;
  std::string tag_prefix = "score";
};

// Fraction of examples whose parsed prediction equals the gold label, with
// greedy decoding. Unmatched predictions count as wrong. Throws EmptySetError.
double score_prompt(const std::string& prompt, const std::vector<LabeledExample>& examples,
                    lm::Backend& lm, const ScoreOptions& options);

class AccuracyScorer final : public ScoreFunction {
 public:
  AccuracyScorer(std::vector<LabeledExample> examples, lm::Backend& lm, ScoreOptions options);

  double score(const std::string& prompt) override;
  lm::UsageSnapshot usage() const override { return metered_.usage(); }

 private:
  std::vector<LabeledExample> examples_;
  lm::MeteredBackend metered_;
  ScoreOptions options_;
};

// Wraps a callable; handy for tests and synthetic objectives.
class FunctionScorer final : public ScoreFunction {
 public:
  explicit FunctionScorer(std::function<double(const std::string&)> fn) : fn_(std::move(fn)) {}
  double score(const std::string& prompt) override { return fn_(prompt); }

 private:
  std::function<double(const std::string&)> fn_;
};

}  // namespace tsgdm::task
