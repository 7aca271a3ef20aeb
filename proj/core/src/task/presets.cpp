// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/task/presets.hpp"

#include <nlohmann/json.hpp>

#include "tsgdm/common/error.hpp"
#include "tsgdm_presets_data.hpp"

namespace tsgdm::task {

std::string_view to_string(ScoreKind kind) {
  return kind == ScoreKind::kExactMatch ? "exact_match" : "classification_accuracy";
}

ScoreKind score_kind_from_string(std::string_view text) {
  if (text == "classification_accuracy") return ScoreKind::kClassificationAccuracy;
  if (text == "exact_match") return ScoreKind::kExactMatch;
  throw ConfigError("task.kind", "expected classification_accuracy or exact_match");
}

const std::vector<TaskPreset>& task_presets() {
  static const std::vector<TaskPreset> presets = [] {
    std::vector<TaskPreset> out;
    const auto doc = nlohmann::json::parse(detail::kPresetJson);
    for (const auto& t : doc.at("tasks")) {
      TaskPreset p;
      p.name = t.at("name").get<std::string>();
      p.kind = score_kind_from_string(t.at("kind").get<std::string>());
      p.label_set = t.at("label_set").get<std::vector<std::string>>();
      p.initial_prompt = t.at("initial_prompt").get<std::string>();
      out.push_back(std::move(p));
    }
    return out;
  }();
  return presets;
}

std::optional<TaskPreset> find_task_preset(std::string_view name) {
  for (const auto& p : task_presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

}  // namespace tsgdm::task
