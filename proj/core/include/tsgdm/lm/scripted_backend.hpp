// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsgdm/lm/completion.hpp"

namespace tsgdm::lm {

// Deterministic offline backend. Rules are tried in order against the full
// prompt (prompt_text followed by assistant_prefix); the first match wins,
// otherwise default_response is returned.
class ScriptedBackend final : public Backend {
 public:
  enum class Match { kContains, kExact };

  struct Rule {
    Match match = Match::kContains;
    std::string pattern;
    std::string response;
    FinishReason finish_reason = FinishReason::kStop;
  };

  ScriptedBackend() = default;
  explicit ScriptedBackend(std::string default_response,
                           FinishReason default_finish = FinishReason::kStop);
  // Not safe while another thread is calling complete() on `other`.
  ScriptedBackend(ScriptedBackend&& other) noexcept;
  ScriptedBackend(const ScriptedBackend&) = delete;
  ScriptedBackend& operator=(const ScriptedBackend&) = delete;

  ScriptedBackend& add_rule(Rule rule);
  ScriptedBackend& when_contains(std::string pattern, std::string response,
                                 FinishReason finish = FinishReason::kStop);
  ScriptedBackend& when_exact(std::string pattern, std::string response,
                              FinishReason finish = FinishReason::kStop);

  CompletionResult complete(const CompletionRequest& request) override;

  std::vector<CompletionRequest> call_log() const;
  std::size_t call_count() const;
  void clear_log();

  // {"default_response": ..., "default_finish_reason": ..., "rules": [{"contains"|"exact": ...,
  // "response": ..., "finish_reason": ...}]}
  static ScriptedBackend from_json(const nlohmann::json& spec);

 private:
  std::vector<Rule> rules_;
  std::string default_response_;
  FinishReason default_finish_ = FinishReason::kStop;

  mutable std::mutex log_mutex_;
  std::vector<CompletionRequest> call_log_;
};

}  // namespace tsgdm::lm
