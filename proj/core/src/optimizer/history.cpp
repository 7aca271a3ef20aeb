// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/history.hpp"

#include "tsgdm/common/error.hpp"

namespace tsgdm::optimizer {

void OptimizerHistory::append(PromptRecord record) {
  if (record.iteration != records_.size()) {
    throw Error("history expects iteration " + std::to_string(records_.size()) + ", got " +
                std::to_string(record.iteration));
  }
  records_.push_back(std::move(record));
}

void to_json(nlohmann::json& j, const Triple& t) {
  j = nlohmann::json{{"input", t.input},
                     {"gold", t.gold},
                     {"prediction", t.prediction},
                     {"correct", t.correct}};
}

void to_json(nlohmann::json& j, const PromptRecord& r) {
  j = nlohmann::json{{"iteration", r.iteration},
                     {"prompt_text", r.prompt_text},
                     {"gradient_text", r.gradient_text ? nlohmann::json(*r.gradient_text)
                                                       : nlohmann::json(nullptr)},
                     {"batch_triples", r.batch_triples},
                     {"holdout_score", r.holdout_score}};
}

}  // namespace tsgdm::optimizer
