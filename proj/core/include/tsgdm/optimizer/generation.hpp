// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "tsgdm/common/random.hpp"
#include "tsgdm/lm/completion.hpp"
#include "tsgdm/optimizer/history.hpp"
#include "tsgdm/optimizer/params.hpp"

namespace tsgdm::optimizer {

// Runs the analyze template on the record's prompt and batch and returns
// the completion verbatim. Throws EmptyBatchError on an empty batch.
std::string compute_textual_gradient(const PromptRecord& current,
                                     const TemplateText& analyze_template, lm::Backend& lm,
                                     const GenerationParams& gen, std::string_view tag = "");

// Refine-template rendering for one source record: its prompt, its own
// batch, and in gradient mode its own gradient.
std::string render_refine_prompt(const PromptRecord& source, const GenerationParams& gen);

// Concatenation baseline context: the last min(window, size) prompts,
// oldest first, rendered into `templ` together with the newest batch.
// Throws EmptyHistoryError.
std::string concat_momentum_prompt(const OptimizerHistory& history, std::size_t window,
                                   const TemplateText& templ);

// Shared block loop. Runs ceil(max_total_tokens / block_tokens) blocks; block
// b asks for min(block_tokens, tokens left) new tokens conditioned on
// conditioning(b), with the candidate so far as assistant prefix. Stops
// after a block that finishes with stop or eos.
std::string generate_blocks(const GenerationParams& gen, lm::Backend& lm,
                            const std::function<std::string(std::size_t block)>& conditioning,
                            std::string_view tag_prefix);

// Momentum generation: every block draws its source record from the
// history with momentum_weights(alpha, size - 1).
// Throws EmptyHistoryError.
std::string momentum_generate(const OptimizerHistory& history, const GenerationParams& gen,
                              RandomStream& rng, lm::Backend& lm,
                              std::string_view tag_prefix = "");

// Plain generation: every block conditions on `current`.
std::string generate_vanilla(const PromptRecord& current, const GenerationParams& gen,
                             lm::Backend& lm, std::string_view tag_prefix = "");

}  // namespace tsgdm::optimizer
