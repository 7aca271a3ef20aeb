// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "tsgdm/lm/completion.hpp"

namespace tsgdm::lm {

enum class ApiShape { kChat, kCompletions };

struct RemoteConfig {
  // Scheme, host, optional port and path prefix, e.g. "https://api.openai.com/v1".
  std::string base_url;
  std::string model;
  // Name of the environment variable holding the API key. Unset or empty
  // variable means no Authorization header.
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 60.0;
  ApiShape shape = ApiShape::kChat;
  int max_attempts = 4;
  double initial_backoff_seconds = 1.0;
  double max_backoff_seconds = 30.0;
};

RemoteConfig remote_config_from_json(const nlohmann::json& j);

// Client for OpenAI-compatible /chat/completions and /completions endpoints.
//
// HTTP 429, 5xx, timeouts and connection failures are retried with
// exponential backoff up to max_attempts total attempts, then surface as
// NetworkError. 401/403 raise AuthError; any other 4xx or an unparseable
// body raises ProtocolError without retrying.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteConfig config);
  ~RemoteBackend() override;

  CompletionResult complete(const CompletionRequest& request) override;

  const RemoteConfig& config() const noexcept { return config_; }

  // Attempts issued by the most recent complete() on this thread.
  static int last_attempt_count() noexcept;

  // Request body for the configured shape. Exposed for tests.
  nlohmann::json build_body(const CompletionRequest& request) const;
  // Throws ProtocolError.
  static CompletionResult parse_response(const std::string& body, ApiShape shape);

 private:
  struct Endpoint;
  RemoteConfig config_;
  std::unique_ptr<Endpoint> endpoint_;
};

}  // namespace tsgdm::lm
