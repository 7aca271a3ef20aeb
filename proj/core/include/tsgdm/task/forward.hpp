// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsgdm/lm/completion.hpp"
#include "tsgdm/task/task.hpp"

namespace tsgdm::task {

// "<prompt>\n<input>\nAnswer:", byte-exact.
std::string render_forward(std::string_view prompt, std::string_view input_text);

// Lowercase, map every non-alphanumeric byte to a space, collapse runs of
// spaces and trim.
std::string normalize_text(std::string_view text);

// Returns the unique label whose normalized form occurs as a whole-word
// substring of the normalized completion. Zero or several matching labels
// give nullopt (Unmatched).
std::optional<std::string> parse_label(std::string_view completion,
                                       const std::vector<std::string>& label_set);

// Final answer of a free-form completion: the last number when one exists
// (thousands separators dropped, trailing fractional zeros trimmed), else
// the normalized text.
std::string extract_final_answer(std::string_view completion);

struct Prediction {
  std::string raw;
  // Parsed label (classification) or extracted answer (exact match).
  // nullopt means Unmatched.
  std::optional<std::string> parsed;
};

struct PredictOptions {
  int max_new_tokens = 16;
  double temperature = 0.0;
  std::string request_tag;
  // Overrides render_forward when set; must use the placeholders
  // {{ prompt }} and {{ input }}.
  const TemplateText* forward_template = nullptr;
};

Prediction predict(lm::Backend& lm, std::string_view prompt, std::string_view input_text,
                   const std::vector<std::string>& label_set,
                   ScoreKind kind = ScoreKind::kClassificationAccuracy,
                   const PredictOptions& options = {});

bool is_correct(const Prediction& prediction, std::string_view gold, ScoreKind kind);

}  // namespace tsgdm::task
