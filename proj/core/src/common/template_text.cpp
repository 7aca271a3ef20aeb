// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/common/template_text.hpp"

#include "tsgdm/common/error.hpp"

namespace tsgdm {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Calls on_text for literal runs and on_field for each placeholder name.
template <typename OnText, typename OnField>
void scan(std::string_view text, OnText on_text, OnField on_field) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find("{{", pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw TemplateError("unterminated placeholder at offset " + std::to_string(open));
    }
    on_text(text.substr(pos, open - pos));
    on_field(trim(text.substr(open + 2, close - open - 2)));
    pos = close + 2;
  }
  on_text(text.substr(pos));
}

}  // namespace

TemplateText::TemplateText(std::string text) : text_(std::move(text)) {
  scan(text_, [](std::string_view) {}, [](std::string_view name) {
    if (name.empty()) throw TemplateError("empty placeholder name");
  });
}

std::set<std::string> TemplateText::placeholders() const {
  std::set<std::string> names;
  scan(text_, [](std::string_view) {}, [&](std::string_view name) { names.emplace(name); });
  return names;
}

bool TemplateText::has_placeholder(std::string_view name) const {
  return placeholders().count(std::string(name)) > 0;
}

std::string TemplateText::render(
    const std::map<std::string, std::string, std::less<>>& values) const {
  std::string out;
  out.reserve(text_.size());
  scan(
      text_, [&](std::string_view literal) { out.append(literal); },
      [&](std::string_view name) {
        auto it = values.find(name);
        if (it == values.end()) {
          throw TemplateError("no value for placeholder '" + std::string(name) + "'");
        }
        out.append(it->second);
      });
  return out;
}

}  // namespace tsgdm
