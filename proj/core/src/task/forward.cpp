// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/task/forward.hpp"

#include <cctype>
#include <regex>

namespace tsgdm::task {

std::string render_forward(std::string_view prompt, std::string_view input_text) {
  std::string out;
  out.reserve(prompt.size() + input_text.size() + 9);
  out.append(prompt);
  out.push_back('\n');
  out.append(input_text);
  out.append("\nAnswer:");
  return out;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::optional<std::string> parse_label(std::string_view completion,
                                       const std::vector<std::string>& label_set) {
  const std::string haystack = " " + normalize_text(completion) + " ";
  std::optional<std::string> found;
  for (const auto& label : label_set) {
    const std::string needle = normalize_text(label);
    if (needle.empty()) continue;
    if (haystack.find(" " + needle + " ") != std::string::npos) {
      if (found) return std::nullopt;
      found = label;
    }
  }
  return found;
}

std::string extract_final_answer(std::string_view completion) {
  static const std::regex number(R"(-?\d[\d,]*(?:\.\d+)?)");
  const std::string text(completion);
  std::string last;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number);
       it != std::sregex_iterator(); ++it) {
    last = it->str();
  }
  if (last.empty()) return normalize_text(completion);

  std::string digits;
  for (char c : last) {
    if (c != ',') digits.push_back(c);
  }
  if (digits.find('.') != std::string::npos) {
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
  }
  if (digits == "-0") digits = "0";
  return digits;
}

Prediction predict(lm::Backend& lm, std::string_view prompt, std::string_view input_text,
                   const std::vector<std::string>& label_set, ScoreKind kind,
                   const PredictOptions& options) {
  lm::CompletionRequest request;
  request.prompt_text =
      options.forward_template != nullptr
          ? options.forward_template->render(
                {{"prompt", std::string(prompt)}, {"input", std::string(input_text)}})
          : render_forward(prompt, input_text);
  request.max_new_tokens = options.max_new_tokens;
  request.temperature = options.temperature;
  request.request_tag = options.request_tag;

  Prediction p;
  p.raw = lm::complete(lm, request).text;
  if (kind == ScoreKind::kClassificationAccuracy) {
    p.parsed = parse_label(p.raw, label_set);
  } else {
    std::string answer = extract_final_answer(p.raw);
    if (!answer.empty()) p.parsed = std::move(answer);
  }
  return p;
}

bool is_correct(const Prediction& prediction, std::string_view gold, ScoreKind kind) {
  if (!prediction.parsed) return false;
  if (kind == ScoreKind::kClassificationAccuracy) return *prediction.parsed == gold;
  return *prediction.parsed == extract_final_answer(gold);
}

}  // namespace tsgdm::task
