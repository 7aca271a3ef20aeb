// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tsgdm::optimizer {

// (input, gold, prediction) from one forward pass over a batch.
struct Triple {
  std::string input;
  std::string gold;
  std::string prediction;
  bool correct = false;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// One meta-prompt in the optimizer history.
struct PromptRecord {
  std::size_t iteration = 0;
  std::string prompt_text;
  // Textual gradient; present only when refinement is gradient-driven.
  std::optional<std::string> gradient_text;
  std::vector<Triple> batch_triples;
  double holdout_score = 0.0;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

// Append-only sequence of records with iterations 0, 1, 2, ...
class OptimizerHistory {
 public:
  // Throws Error unless record.iteration == size().
  void append(PromptRecord record);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const PromptRecord& operator[](std::size_t i) const { return records_[i]; }
  const PromptRecord& back() const { return records_.back(); }
  std::span<const PromptRecord> records() const noexcept { return records_; }

 private:
  std::vector<PromptRecord> records_;
};

void to_json(nlohmann::json& j, const Triple& t);
void to_json(nlohmann::json& j, const PromptRecord& r);

}  // namespace tsgdm::optimizer
