// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/task/score.hpp"

#include <algorithm>
#include <future>

#include "tsgdm/common/error.hpp"

namespace tsgdm::task {

double score_prompt(const std::string& prompt, const std::vector<LabeledExample>& examples,
                    lm::Backend& lm, const ScoreOptions& options) {
  if (examples.empty()) throw EmptySetError("cannot score a prompt on an empty example set");

  auto judge = [&](std::size_t i) {
    PredictOptions po;
    po.max_new_tokens = options.max_new_tokens;
    po.temperature = 0.0;
    po.request_tag = options.tag_prefix + "/ex" + std::to_string(i);
    po.forward_template = options.forward_template;
    const Prediction p =
        predict(lm, prompt, examples[i].input_text, options.label_set, options.kind, po);
    return is_correct(p, examples[i].gold_label, options.kind);
  };

  std::vector<char> correct(examples.size(), 0);
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, examples.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < examples.size(); ++i) correct[i] = judge(i);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < examples.size(); i += workers) correct[i] = judge(i);
      }));
    }
    for (auto& job : jobs) job.get();
  }

  const auto hits = std::count(correct.begin(), correct.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

AccuracyScorer::AccuracyScorer(std::vector<LabeledExample> examples, lm::Backend& lm,
                               ScoreOptions options)
    : examples_(std::move(examples)), metered_(lm), options_(std::move(options)) {
  if (examples_.empty()) throw EmptySetError("scorer needs at least one example");
}

double AccuracyScorer::score(const std::string& prompt) {
  return score_prompt(prompt, examples_, metered_, options_);
}

}  // namespace tsgdm::task
