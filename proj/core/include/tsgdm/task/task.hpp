// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tsgdm/common/random.hpp"
#include "tsgdm/common/template_text.hpp"

namespace tsgdm::task {

struct LabeledExample {
  std::string input_text;
  std::string gold_label;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

enum class ScoreKind { kClassificationAccuracy, kExactMatch };

// The classification forward template: prompt, input, then an "Answer:" line.
inline constexpr const char* kForwardTemplate = "{{ prompt }}\n{{ input }}\nAnswer:";

struct TaskBinding {
  std::string name;
  // Ordered label set; empty for exact-match tasks.
  std::vector<std::string> label_set;
  ScoreKind kind = ScoreKind::kClassificationAccuracy;
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> holdout;
  std::vector<LabeledExample> test;
  std::string initial_prompt;
  TemplateText forward_template{kForwardTemplate};

  // Checks nonempty initial prompt, label membership and split disjointness
  // by input text. Throws Error.
  void validate() const;
};

// Reads one JSON object per line with "text" and "label" fields. Blank
// lines are skipped. An empty label_set disables label validation.
std::vector<LabeledExample> load_dataset(const std::filesystem::path& path,
                                         const std::vector<std::string>& label_set);

// Draws m examples. Without replacement the draw is a uniformly random
// m-subset in random order; requires m <= pool size (SizeError otherwise).
std::vector<LabeledExample> sample_batch(const std::vector<LabeledExample>& pool, std::size_t m,
                                         RandomStream& rng, bool with_replacement);

}  // namespace tsgdm::task
