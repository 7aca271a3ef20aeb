// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsgdm/common/template_text.hpp"
#include "tsgdm/optimizer/templates.hpp"

namespace tsgdm::optimizer {

enum class GenerationMode {
  // Condition each block on a past meta-prompt.
  kCase1MetaPrompt,
  // Condition each block on a past meta-prompt together with its own textual gradient.
  kCase2Gradient,
  // Baseline: condition on the concatenation of recent meta-prompts.
  kConcatBaseline,
};

std::string_view to_string(GenerationMode mode);
GenerationMode generation_mode_from_string(std::string_view text);

struct GenerationParams {
  // Momentum parameter. 0 reduces momentum generation to the plain update.
  double alpha = 0.6;
  int max_total_tokens = 100;
  // Tokens requested per momentum draw; 1 is strict per-token sampling.
  int block_tokens = 10;
  double temperature = 0.7;
  // Candidates generated per iteration (k).
  int candidates = 20;
  GenerationMode mode = GenerationMode::kCase1MetaPrompt;
  TemplateText refine_template = default_refine_template();
  std::optional<TemplateText> analyze_template;
  int analyze_max_tokens = 256;
  TemplateText concat_template = default_concat_template();
  int concat_window = 3;
  std::vector<std::string> stop_sequences;
  // Generate the k candidates concurrently. Results stay deterministic, but
  // the order of gateway calls does not.
  bool parallel_candidates = false;

  // Defaults for a mode: picks the gradient refine template and the analyze
  // template for kCase2Gradient.
  static GenerationParams for_mode(GenerationMode mode);

  // Throws DomainError / TemplateError.
  void validate() const;
};

enum class HypothesisPreset { kH0, kH1, kCustom };

std::string_view to_string(HypothesisPreset preset);
HypothesisPreset hypothesis_preset_from_string(std::string_view text);

struct RunConfig {
  int total_iterations = 20;
  int batch_size = 20;
  // Size of the training pool drawn from the task's train split; unset uses all of it.
  std::optional<int> train_size;
  int patience = 2;
  HypothesisPreset preset = HypothesisPreset::kH0;
  std::uint64_t seed = 0;
  GenerationParams generation;
  bool use_momentum = true;
  bool batch_with_replacement = false;
  // Generation budget for forward passes on training batches.
  int forward_max_tokens = 16;

  // H0: temperature 0.7, patience 2. H1: temperature 1.1, patience 5.
  // kCustom leaves both untouched.
  void apply_preset();

  void validate() const;
};

}  // namespace tsgdm::optimizer
