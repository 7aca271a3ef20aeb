// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/generation.hpp"

#include <algorithm>

#include "tsgdm/common/error.hpp"
#include "tsgdm/optimizer/weights.hpp"

namespace tsgdm::optimizer {
namespace {

std::string join_tag(std::string_view prefix, std::string_view leaf) {
  if (prefix.empty()) return std::string(leaf);
  std::string out(prefix);
  out.push_back('/');
  out.append(leaf);
  return out;
}

}  // namespace

std::string compute_textual_gradient(const PromptRecord& current,
                                     const TemplateText& analyze_template, lm::Backend& lm,
                                     const GenerationParams& gen, std::string_view tag) {
  if (current.batch_triples.empty()) {
    throw EmptyBatchError("textual gradient needs a nonempty batch");
  }
  lm::CompletionRequest request;
  request.prompt_text = analyze_template.render(
      {{"prompt", current.prompt_text}, {"examples", render_triples(current.batch_triples)}});
  request.max_new_tokens = gen.analyze_max_tokens;
  request.temperature = gen.temperature;
  request.request_tag = join_tag(tag, "analyze");
  return lm::complete(lm, request).text;
}

std::string render_refine_prompt(const PromptRecord& source, const GenerationParams& gen) {
  std::map<std::string, std::string, std::less<>> values{
      {"prompt", source.prompt_text}, {"examples", render_triples(source.batch_triples)}};
  if (gen.mode == GenerationMode::kCase2Gradient) {
    if (!source.gradient_text) {
      throw Error("record " + std::to_string(source.iteration) + " has no textual gradient");
    }
    values.emplace("gradient", *source.gradient_text);
  }
  return gen.refine_template.render(values);
}

std::string concat_momentum_prompt(const OptimizerHistory& history, std::size_t window,
                                   const TemplateText& templ) {
  if (history.empty()) throw EmptyHistoryError("concatenation needs a nonempty history");
  if (window == 0) throw DomainError("concat window must be >= 1");
  const std::size_t first = history.size() - std::min(window, history.size());
  std::string joined;
  for (std::size_t i = first; i < history.size(); ++i) {
    joined += "\n[" + std::to_string(i - first + 1) + "] " + history[i].prompt_text;
  }
  joined.push_back('\n');
  return templ.render(
      {{"past_prompts", joined}, {"examples", render_triples(history.back().batch_triples)}});
}

std::string generate_blocks(const GenerationParams& gen, lm::Backend& lm,
                            const std::function<std::string(std::size_t block)>& conditioning,
                            std::string_view tag_prefix) {
  const int total = gen.max_total_tokens;
  const int step = gen.block_tokens;
  const std::size_t blocks = static_cast<std::size_t>((total + step - 1) / step);

  std::string candidate;
  int remaining = total;
  for (std::size_t b = 0; b < blocks; ++b) {
    lm::CompletionRequest request;
    request.prompt_text = conditioning(b);
    request.assistant_prefix = candidate;
    request.max_new_tokens = std::min(step, remaining);
    request.temperature = gen.temperature;
    request.stop_sequences = gen.stop_sequences;
    request.request_tag = join_tag(tag_prefix, "block" + std::to_string(b));

    const lm::CompletionResult result = lm::complete(lm, request);
    candidate += result.text;
    remaining -= request.max_new_tokens;
    if (result.finish_reason != lm::FinishReason::kLength) break;
  }
  return candidate;
}

std::string momentum_generate(const OptimizerHistory& history, const GenerationParams& gen,
                              RandomStream& rng, lm::Backend& lm, std::string_view tag_prefix) {
  if (history.empty()) throw EmptyHistoryError("momentum generation needs a nonempty history");
  const WeightVector weights = momentum_weights(gen.alpha, history.size() - 1);
  return generate_blocks(
      gen, lm,
      [&](std::size_t) { return render_refine_prompt(history[sample_source(weights, rng)], gen); },
      tag_prefix);
}

std::string generate_vanilla(const PromptRecord& current, const GenerationParams& gen,
                             lm::Backend& lm, std::string_view tag_prefix) {
  const std::string conditioning = render_refine_prompt(current, gen);
  return generate_blocks(
      gen, lm, [&](std::size_t) { return conditioning; }, tag_prefix);
}

}  // namespace tsgdm::optimizer
