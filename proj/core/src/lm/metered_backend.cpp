// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/lm/metered_backend.hpp"

#include "tsgdm/common/error.hpp"

namespace tsgdm::lm {

CompletionResult MeteredBackend::complete(const CompletionRequest& request) {
  const std::int64_t n = calls_.fetch_add(1) + 1;
  if (max_calls_ && n > *max_calls_) {
    calls_.fetch_sub(1);
    throw BudgetExceededError("gateway call budget of " + std::to_string(*max_calls_) +
                              " exhausted");
  }
  CompletionResult result = inner_.complete(request);
  prompt_tokens_ += result.prompt_tokens;
  completion_tokens_ += result.completion_tokens;
  return result;
}

UsageSnapshot MeteredBackend::usage() const noexcept {
  return {calls_.load(), prompt_tokens_.load(), completion_tokens_.load()};
}

}  // namespace tsgdm::lm
