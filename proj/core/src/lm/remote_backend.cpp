// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "tsgdm/lm/remote_backend.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "tsgdm/common/error.hpp"

namespace tsgdm::lm {
namespace {

thread_local int g_last_attempts = 0;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("backend.remote.base_url", "missing scheme in '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

struct RemoteBackend::Endpoint {
  std::string origin;
  std::string path;
  httplib::Headers headers;
};

RemoteConfig remote_config_from_json(const nlohmann::json& j) {
  RemoteConfig c;
  c.base_url = j.at("base_url").get<std::string>();
  c.model = j.at("model").get<std::string>();
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  const std::string shape = j.value("api", std::string("chat"));
  if (shape == "chat") {
    c.shape = ApiShape::kChat;
  } else if (shape == "completions") {
    c.shape = ApiShape::kCompletions;
  } else {
    throw ConfigError("backend.remote.api", "expected chat or completions");
  }
  c.max_attempts = j.value("max_attempts", c.max_attempts);
  c.initial_backoff_seconds = j.value("initial_backoff_seconds", c.initial_backoff_seconds);
  c.max_backoff_seconds = j.value("max_backoff_seconds", c.max_backoff_seconds);
  if (c.max_attempts < 1) throw ConfigError("backend.remote.max_attempts", "must be >= 1");
  if (!(c.timeout_seconds > 0)) throw ConfigError("backend.remote.timeout_seconds", "must be > 0");
  return c;
}

RemoteBackend::RemoteBackend(RemoteConfig config)
    : config_(std::move(config)), endpoint_(std::make_unique<Endpoint>()) {
  const ParsedUrl url = split_url(config_.base_url);
  endpoint_->origin = url.origin;
  endpoint_->path =
      url.prefix + (config_.shape == ApiShape::kChat ? "/chat/completions" : "/completions");
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key) {
    endpoint_->headers.emplace("Authorization", std::string("Bearer ") + key);
  }
}

RemoteBackend::~RemoteBackend() = default;

int RemoteBackend::last_attempt_count() noexcept { return g_last_attempts; }

nlohmann::json RemoteBackend::build_body(const CompletionRequest& request) const {
  nlohmann::json body = {{"model", config_.model},
                         {"max_tokens", request.max_new_tokens},
                         {"temperature", request.temperature},
                         {"n", 1}};
  if (config_.shape == ApiShape::kChat) {
    nlohmann::json messages = nlohmann::json::array();
    messages.push_back({{"role", "user"}, {"content", request.prompt_text}});
    if (!request.assistant_prefix.empty()) {
      messages.push_back({{"role", "assistant"}, {"content", request.assistant_prefix}});
    }
    body["messages"] = std::move(messages);
  } else {
    body["prompt"] = request.prompt_text + request.assistant_prefix;
  }
  if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;
  return body;
}

CompletionResult RemoteBackend::parse_response(const std::string& body, ApiShape shape) {
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& choice = j.at("choices").at(0);
    CompletionResult result;
    result.text = shape == ApiShape::kChat ? choice.at("message").at("content").get<std::string>()
                                           : choice.at("text").get<std::string>();
    const auto& reason = choice.value("finish_reason", nlohmann::json());
    if (reason.is_string() && reason.get<std::string>() == "length") {
      result.finish_reason = FinishReason::kLength;
    } else if (reason.is_string() && reason.get<std::string>() == "stop") {
      result.finish_reason = FinishReason::kStop;
    } else {
      result.finish_reason = FinishReason::kEos;
    }
    if (j.contains("usage") && j["usage"].is_object()) {
      result.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
      result.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
    }
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("unparseable completion response: ") + e.what());
  }
}

CompletionResult RemoteBackend::complete(const CompletionRequest& request) {
  request.validate();
  const std::string payload = build_body(request).dump();

  httplib::Client client(endpoint_->origin);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>((config_.timeout_seconds - secs) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  std::string last_error;
  double backoff = config_.initial_backoff_seconds;
  g_last_attempts = 0;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    g_last_attempts = attempt;
    auto res = client.Post(endpoint_->path, endpoint_->headers, payload, "application/json");
    if (res) {
      const int status = res->status;
      if (status >= 200 && status < 300) return parse_response(res->body, config_.shape);
      if (status == 401 || status == 403) {
        throw AuthError("credentials rejected (HTTP " + std::to_string(status) + ")");
      }
      if (!retryable_status(status)) {
        throw ProtocolError("HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200));
      }
      last_error = "HTTP " + std::to_string(status);
    } else {
      last_error = httplib::to_string(res.error());
    }
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff = std::min(backoff * 2.0, config_.max_backoff_seconds);
    }
  }
  throw NetworkError("gave up after " + std::to_string(config_.max_attempts) +
                     " attempts: " + last_error);
}

}  // namespace tsgdm::lm
