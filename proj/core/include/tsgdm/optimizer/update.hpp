// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsgdm/common/random.hpp"
#include "tsgdm/lm/completion.hpp"
#include "tsgdm/optimizer/history.hpp"
#include "tsgdm/optimizer/params.hpp"
#include "tsgdm/task/score.hpp"

namespace tsgdm::optimizer {

struct UpdateResult {
  std::string next_prompt;
  std::vector<std::string> candidates;
  // Empty when a single candidate is generated (it is taken unscored).
  std::vector<double> candidate_scores;
  std::size_t selected_index = 0;
};

// Highest score wins; ties go to the lowest index.
std::size_t argmax_lowest_index(const std::vector<double>& scores);

// Each update generates gen.candidates candidates. Candidate j of iteration
// `iteration` draws from master.derive({kCandidate, iteration, j}), so the
// outcome does not depend on the order in which candidates are produced.
// Gateway tags are "iter<iteration>/cand<j>/block<b>".

UpdateResult update_mom(const OptimizerHistory& history, const GenerationParams& gen,
                        task::ScoreFunction& score, const RandomStream& master,
                        lm::Backend& lm, std::size_t iteration);

UpdateResult update_vanilla(const PromptRecord& current, const GenerationParams& gen,
                            task::ScoreFunction& score, const RandomStream& master,
                            lm::Backend& lm, std::size_t iteration);

// Concatenation baseline: the plain block loop conditioned on
// concat_momentum_prompt(history, gen.concat_window, gen.concat_template).
UpdateResult update_concat(const OptimizerHistory& history, const GenerationParams& gen,
                           task::ScoreFunction& score, const RandomStream& master,
                           lm::Backend& lm, std::size_t iteration);

}  // namespace tsgdm::optimizer
