// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/update.hpp"

#include <future>

#include "tsgdm/common/error.hpp"
#include "tsgdm/optimizer/generation.hpp"

namespace tsgdm::optimizer {
namespace {

std::string candidate_tag(std::size_t iteration, std::size_t j) {
  return "iter" + std::to_string(iteration) + "/cand" + std::to_string(j);
}

// Generates candidates with `make(j, rng, tag)` and picks the winner.
template <typename Make>
UpdateResult select_candidates(const GenerationParams& gen, task::ScoreFunction& score,
                               const RandomStream& master, std::size_t iteration, Make make) {
  const auto k = static_cast<std::size_t>(gen.candidates);
  UpdateResult out;
  out.candidates.resize(k);

  auto produce = [&](std::size_t j) {
    RandomStream rng = master.derive(
        {static_cast<std::uint64_t>(StreamDomain::kCandidate), iteration, j});
    out.candidates[j] = make(rng, candidate_tag(iteration, j));
  };
  if (gen.parallel_candidates && k > 1) {
    std::vector<std::future<void>> jobs;
    jobs.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      jobs.push_back(std::async(std::launch::async, produce, j));
    }
    for (auto& job : jobs) job.get();
  } else {
    for (std::size_t j = 0; j < k; ++j) produce(j);
  }

  if (k == 1) {
    out.next_prompt = out.candidates.front();
    return out;
  }
  out.candidate_scores.reserve(k);
  for (const auto& c : out.candidates) out.candidate_scores.push_back(score.score(c));
  out.selected_index = argmax_lowest_index(out.candidate_scores);
  out.next_prompt = out.candidates[out.selected_index];
  return out;
}

}  // namespace

std::size_t argmax_lowest_index(const std::vector<double>& scores) {
  if (scores.empty()) throw EmptySetError("argmax of an empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

UpdateResult update_mom(const OptimizerHistory& history, const GenerationParams& gen,
                        task::ScoreFunction& score, const RandomStream& master,
                        lm::Backend& lm, std::size_t iteration) {
  if (history.empty()) throw EmptyHistoryError("update_mom needs a nonempty history");
  return select_candidates(gen, score, master, iteration,
                           [&](RandomStream& rng, const std::string& tag) {
                             return momentum_generate(history, gen, rng, lm, tag);
                           });
}

UpdateResult update_vanilla(const PromptRecord& current, const GenerationParams& gen,
                            task::ScoreFunction& score, const RandomStream& master,
                            lm::Backend& lm, std::size_t iteration) {
  return select_candidates(gen, score, master, iteration,
                           [&](RandomStream&, const std::string& tag) {
                             return generate_vanilla(current, gen, lm, tag);
                           });
}

UpdateResult update_concat(const OptimizerHistory& history, const GenerationParams& gen,
                           task::ScoreFunction& score, const RandomStream& master,
                           lm::Backend& lm, std::size_t iteration) {
  const std::string conditioning = concat_momentum_prompt(
      history, static_cast<std::size_t>(gen.concat_window), gen.concat_template);
  return select_candidates(gen, score, master, iteration,
                           [&](RandomStream&, const std::string& tag) {
                             return generate_blocks(
                                 gen, lm, [&](std::size_t) { return conditioning; }, tag);
                           });
}

}  // namespace tsgdm::optimizer
