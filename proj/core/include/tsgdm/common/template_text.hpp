// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace tsgdm {

// Prompt template with `{{ name }}` placeholders (whitespace inside the
// braces is optional). Rendering substitutes values verbatim; substituted
// text is never re-scanned for placeholders.
class TemplateText {
 public:
  TemplateText() = default;
  explicit TemplateText(std::string text);

  const std::string& text() const noexcept { return text_; }
  bool empty() const noexcept { return text_.empty(); }

  std::set<std::string> placeholders() const;
  bool has_placeholder(std::string_view name) const;

  // Throws TemplateError when a placeholder has no value. Extra values are ignored.
  std::string render(const std::map<std::string, std::string, std::less<>>& values) const;

  friend bool operator==(const TemplateText&, const TemplateText&) = default;

 private:
  std::string text_;
};

}  // namespace tsgdm
