// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/lm/completion.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "tsgdm/common/error.hpp"

namespace tsgdm::lm {

std::string_view to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::kLength:
      return "length";
    case FinishReason::kStop:
      return "stop";
    case FinishReason::kEos:
      return "eos";
  }
  return "stop";
}

FinishReason finish_reason_from_string(std::string_view text) {
  if (text == "length") return FinishReason::kLength;
  if (text == "stop") return FinishReason::kStop;
  if (text == "eos") return FinishReason::kEos;
  throw ProtocolError("unknown finish_reason '" + std::string(text) + "'");
}

void CompletionRequest::validate() const {
  if (max_new_tokens < 1) {
    throw DomainError("max_new_tokens must be >= 1, got " + std::to_string(max_new_tokens));
  }
  if (!(temperature >= 0.0)) {
    throw DomainError("temperature must be >= 0");
  }
}

std::string request_digest(const CompletionRequest& request) {
  // nlohmann::json objects keep keys sorted and print doubles in shortest
  // round-trip form, so dump() is a stable canonical encoding.
  const nlohmann::json canonical = {
      {"assistant_prefix", request.assistant_prefix},
      {"max_new_tokens", request.max_new_tokens},
      {"prompt_text", request.prompt_text},
      {"stop_sequences", request.stop_sequences},
      {"temperature", request.temperature},
  };
  const std::string bytes = canonical.dump();

  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int md_len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &md_len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(md_len * 2);
  char buf[3];
  for (unsigned int i = 0; i < md_len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex.append(buf, 2);
  }
  return hex;
}

void to_json(nlohmann::json& j, const CompletionRequest& r) {
  j = nlohmann::json{{"prompt_text", r.prompt_text},
                     {"assistant_prefix", r.assistant_prefix},
                     {"max_new_tokens", r.max_new_tokens},
                     {"temperature", r.temperature},
                     {"stop_sequences", r.stop_sequences},
                     {"request_tag", r.request_tag}};
}

void from_json(const nlohmann::json& j, CompletionRequest& r) {
  r.prompt_text = j.at("prompt_text").get<std::string>();
  r.assistant_prefix = j.value("assistant_prefix", std::string{});
  r.max_new_tokens = j.at("max_new_tokens").get<int>();
  r.temperature = j.at("temperature").get<double>();
  r.stop_sequences = j.value("stop_sequences", std::vector<std::string>{});
  r.request_tag = j.value("request_tag", std::string{});
}

void to_json(nlohmann::json& j, const CompletionResult& r) {
  j = nlohmann::json{{"text", r.text},
                     {"finish_reason", std::string(to_string(r.finish_reason))},
                     {"prompt_tokens", r.prompt_tokens},
                     {"completion_tokens", r.completion_tokens}};
}

void from_json(const nlohmann::json& j, CompletionResult& r) {
  r.text = j.at("text").get<std::string>();
  r.finish_reason = finish_reason_from_string(j.at("finish_reason").get<std::string>());
  r.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
  r.completion_tokens = j.value("completion_tokens", std::int64_t{0});
}

}  // namespace tsgdm::lm
