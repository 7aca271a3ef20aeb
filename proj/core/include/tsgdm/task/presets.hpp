// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsgdm/task/task.hpp"

namespace tsgdm::task {

// Shipped task definition: label set, scoring kind and the zero-shot
// human-written initial prompt. Corpora are supplied separately.
struct TaskPreset {
  std::string name;
  ScoreKind kind = ScoreKind::kClassificationAccuracy;
  std::vector<std::string> label_set;
  std::string initial_prompt;
};

const std::vector<TaskPreset>& task_presets();
std::optional<TaskPreset> find_task_preset(std::string_view name);

std::string_view to_string(ScoreKind kind);
ScoreKind score_kind_from_string(std::string_view text);

}  // namespace tsgdm::task
