// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>

#include "tsgdm/common/template_text.hpp"
#include "tsgdm/optimizer/history.hpp"

namespace tsgdm::optimizer {

// Single-step refinement. Placeholders: prompt, examples.
const TemplateText& default_refine_template();

// Refinement driven by a textual gradient. Placeholders: prompt, gradient, examples.
const TemplateText& default_gradient_refine_template();

// Error analysis producing the textual gradient. Placeholders: prompt, examples.
const TemplateText& default_analyze_template();

// Concatenation baseline: all recent prompts in one context.
// Placeholders: past_prompts, examples.
const TemplateText& default_concat_template();

// Successes first, then errors, in batch order.
std::string render_triples(std::span<const Triple> triples);

}  // namespace tsgdm::optimizer
