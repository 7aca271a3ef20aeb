// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/lm/scripted_backend.hpp"

#include <algorithm>
#include <sstream>

#include "tsgdm/common/error.hpp"

namespace tsgdm::lm {
namespace {

std::int64_t count_words(const std::string& text) {
  std::istringstream in(text);
  std::int64_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

}  // namespace

ScriptedBackend::ScriptedBackend(std::string default_response, FinishReason default_finish)
    : default_response_(std::move(default_response)), default_finish_(default_finish) {}

ScriptedBackend::ScriptedBackend(ScriptedBackend&& other) noexcept
    : rules_(std::move(other.rules_)),
      default_response_(std::move(other.default_response_)),
      default_finish_(other.default_finish_),
      call_log_(std::move(other.call_log_)) {}

ScriptedBackend& ScriptedBackend::add_rule(Rule rule) {
  rules_.push_back(std::move(rule));
  return *this;
}

ScriptedBackend& ScriptedBackend::when_contains(std::string pattern, std::string response,
                                                FinishReason finish) {
  return add_rule({Match::kContains, std::move(pattern), std::move(response), finish});
}

ScriptedBackend& ScriptedBackend::when_exact(std::string pattern, std::string response,
                                             FinishReason finish) {
  return add_rule({Match::kExact, std::move(pattern), std::move(response), finish});
}

CompletionResult ScriptedBackend::complete(const CompletionRequest& request) {
  const std::string full = request.prompt_text + request.assistant_prefix;

  const std::string* text = &default_response_;
  FinishReason finish = default_finish_;
  for (const Rule& rule : rules_) {
    const bool hit = rule.match == Match::kExact ? full == rule.pattern
                                                 : full.find(rule.pattern) != std::string::npos;
    if (hit) {
      text = &rule.response;
      finish = rule.finish_reason;
      break;
    }
  }

  CompletionResult result;
  result.text = *text;
  result.finish_reason = finish;
  // Word counts stand in for token counts; a length stop reports the full budget.
  result.prompt_tokens = count_words(full);
  result.completion_tokens =
      finish == FinishReason::kLength
          ? request.max_new_tokens
          : std::min<std::int64_t>(count_words(*text), request.max_new_tokens);

  {
    std::lock_guard lock(log_mutex_);
    call_log_.push_back(request);
  }
  return result;
}

std::vector<CompletionRequest> ScriptedBackend::call_log() const {
  std::lock_guard lock(log_mutex_);
  return call_log_;
}

std::size_t ScriptedBackend::call_count() const {
  std::lock_guard lock(log_mutex_);
  return call_log_.size();
}

void ScriptedBackend::clear_log() {
  std::lock_guard lock(log_mutex_);
  call_log_.clear();
}

ScriptedBackend ScriptedBackend::from_json(const nlohmann::json& spec) {
  auto finish_of = [](const nlohmann::json& obj, const char* key) {
    return obj.contains(key) ? finish_reason_from_string(obj.at(key).get<std::string>())
                             : FinishReason::kStop;
  };
  ScriptedBackend backend(spec.value("default_response", std::string{}),
                          finish_of(spec, "default_finish_reason"));
  for (const auto& r : spec.value("rules", nlohmann::json::array())) {
    Rule rule;
    if (r.contains("exact")) {
      rule.match = Match::kExact;
      rule.pattern = r.at("exact").get<std::string>();
    } else if (r.contains("contains")) {
      rule.pattern = r.at("contains").get<std::string>();
    } else {
      throw ConfigError("backend.scripted.rules", "rule needs 'contains' or 'exact'");
    }
    rule.response = r.at("response").get<std::string>();
    rule.finish_reason = finish_of(r, "finish_reason");
    backend.add_rule(std::move(rule));
  }
  return backend;
}

}  // namespace tsgdm::lm
