// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/params.hpp"

#include "tsgdm/common/error.hpp"

namespace tsgdm::optimizer {

std::string_view to_string(GenerationMode mode) {
  switch (mode) {
    case GenerationMode::kCase1MetaPrompt:
      return "case1_meta_prompt";
    case GenerationMode::kCase2Gradient:
      return "case2_gradient";
    case GenerationMode::kConcatBaseline:
      return "concat_baseline";
  }
  return "case1_meta_prompt";
}

GenerationMode generation_mode_from_string(std::string_view text) {
  if (text == "case1_meta_prompt") return GenerationMode::kCase1MetaPrompt;
  if (text == "case2_gradient") return GenerationMode::kCase2Gradient;
  if (text == "concat_baseline") return GenerationMode::kConcatBaseline;
  throw ConfigError("run.generation.mode",
                    "expected case1_meta_prompt, case2_gradient or concat_baseline");
}

std::string_view to_string(HypothesisPreset preset) {
  switch (preset) {
    case HypothesisPreset::kH0:
      return "H0";
    case HypothesisPreset::kH1:
      return "H1";
    case HypothesisPreset::kCustom:
      return "custom";
  }
  return "custom";
}

HypothesisPreset hypothesis_preset_from_string(std::string_view text) {
  if (text == "H0") return HypothesisPreset::kH0;
  if (text == "H1") return HypothesisPreset::kH1;
  if (text == "custom") return HypothesisPreset::kCustom;
  throw ConfigError("run.preset", "expected H0, H1 or custom");
}

GenerationParams GenerationParams::for_mode(GenerationMode mode) {
  GenerationParams p;
  p.mode = mode;
  if (mode == GenerationMode::kCase2Gradient) {
    p.refine_template = default_gradient_refine_template();
    p.analyze_template = default_analyze_template();
  }
  return p;
}

void GenerationParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (max_total_tokens < 1) throw DomainError("max_total_tokens must be >= 1");
  if (block_tokens < 1) throw DomainError("block_tokens must be >= 1");
  if (block_tokens > max_total_tokens) {
    throw DomainError("block_tokens must not exceed max_total_tokens");
  }
  if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
  if (candidates < 1) throw DomainError("candidates must be >= 1");
  if (concat_window < 1) throw DomainError("concat_window must be >= 1");
  if (analyze_max_tokens < 1) throw DomainError("analyze_max_tokens must be >= 1");

  if (mode == GenerationMode::kConcatBaseline) {
    if (!concat_template.has_placeholder("past_prompts")) {
      throw TemplateError("concat template needs {{ past_prompts }}");
    }
    return;
  }
  if (!refine_template.has_placeholder("prompt")) {
    throw TemplateError("refine template needs {{ prompt }}");
  }
  if (mode == GenerationMode::kCase2Gradient) {
    if (!analyze_template) throw TemplateError("gradient mode needs an analyze template");
    if (!refine_template.has_placeholder("gradient")) {
      throw TemplateError("gradient mode refine template needs {{ gradient }}");
    }
  } else if (analyze_template) {
    throw TemplateError("analyze template is only used in case2_gradient mode");
  }
}

void RunConfig::apply_preset() {
  switch (preset) {
    case HypothesisPreset::kH0:
      generation.temperature = 0.7;
      patience = 2;
      break;
    case HypothesisPreset::kH1:
      generation.temperature = 1.1;
      patience = 5;
      break;
    case HypothesisPreset::kCustom:
      break;
  }
}

void RunConfig::validate() const {
  if (total_iterations < 0) throw DomainError("total_iterations must be >= 0");
  if (batch_size < 1) throw DomainError("batch_size must be >= 1");
  if (train_size && *train_size < 1) throw DomainError("train_size must be >= 1");
  if (patience < 1) throw DomainError("patience must be >= 1");
  if (forward_max_tokens < 1) throw DomainError("forward_max_tokens must be >= 1");
  generation.validate();
}

}  // namespace tsgdm::optimizer
