// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tsgdm::lm {

enum class FinishReason { kLength, kStop, kEos };

std::string_view to_string(FinishReason reason);
FinishReason finish_reason_from_string(std::string_view text);

struct CompletionRequest {
  std::string prompt_text;
  // Partial output the model should continue. Chat backends send it as a
  // trailing assistant message; plain-completion backends append it to
  // prompt_text.
  std::string assistant_prefix;
  int max_new_tokens = 16;
  double temperature = 0.0;
  std::vector<std::string> stop_sequences;
  // Provenance label, e.g. "iter3/cand5/block2". Not part of the digest.
  std::string request_tag;

  // Throws DomainError on max_new_tokens < 1 or negative temperature.
  void validate() const;

  friend bool operator==(const CompletionRequest&, const CompletionRequest&) = default;
};

struct CompletionResult {
  std::string text;
  FinishReason finish_reason = FinishReason::kStop;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  friend bool operator==(const CompletionResult&, const CompletionResult&) = default;
};

// Hex SHA-256 over a canonical encoding of every request field except request_tag.
std::string request_digest(const CompletionRequest& request);

void to_json(nlohmann::json& j, const CompletionRequest& r);
void from_json(const nlohmann::json& j, CompletionRequest& r);
void to_json(nlohmann::json& j, const CompletionResult& r);
void from_json(const nlohmann::json& j, CompletionResult& r);

// Text-completion backend. Implementations must accept concurrent calls.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

// Validates the request, then dispatches.
inline CompletionResult complete(Backend& backend, const CompletionRequest& request) {
  request.validate();
  return backend.complete(request);
}

}  // namespace tsgdm::lm
