// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <optional>

#include "tsgdm/lm/completion.hpp"

namespace tsgdm::lm {

struct UsageSnapshot {
  std::int64_t calls = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

// Counts calls and reported tokens. With a budget, the call that would
// exceed it throws BudgetExceededError instead of reaching the inner backend.
class MeteredBackend final : public Backend {
 public:
  explicit MeteredBackend(Backend& inner, std::optional<std::int64_t> max_calls = std::nullopt)
      : inner_(inner), max_calls_(max_calls) {}

  CompletionResult complete(const CompletionRequest& request) override;

  UsageSnapshot usage() const noexcept;

 private:
  Backend& inner_;
  std::optional<std::int64_t> max_calls_;
  std::atomic<std::int64_t> calls_{0};
  std::atomic<std::int64_t> prompt_tokens_{0};
  std::atomic<std::int64_t> completion_tokens_{0};
};

}  // namespace tsgdm::lm
