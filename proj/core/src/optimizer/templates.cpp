// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/templates.hpp"

namespace tsgdm::optimizer {

const TemplateText& default_refine_template() {
  static const TemplateText t(
      "A student is completing a task that requires producing a text output from a text "
      "input. The student receives an instruction that describes how to produce the output "
      "given each input.\n"
      "The student has made some errors. Your task is to improve the instruction such that "
      "the student can fix the errors.\n\n"
      "Current instruction:\n"
      "{{ prompt }}\n\n"
      "{{ examples }}\n"
      "Improve the instruction to fix the student errors. Clarify the instruction by adding "
      "few words or a short sentence. Be concise.\n\n"
      "Improved instruction:\n");
  return t;
}

const TemplateText& default_gradient_refine_template() {
  static const TemplateText t(
      "A student is completing a task that requires producing a text output from a text "
      "input. The student receives an instruction that describes how to produce the output "
      "given each input.\n"
      "Your task is to improve the instruction using the feedback below.\n\n"
      "Current instruction:\n"
      "{{ prompt }}\n\n"
      "Feedback on the current instruction:\n"
      "{{ gradient }}\n\n"
      "{{ examples }}\n"
      "Write an improved instruction that addresses the feedback. Be concise.\n\n"
      "Improved instruction:\n");
  return t;
}

const TemplateText& default_analyze_template() {
  static const TemplateText t(
      "A student followed the instruction below on a batch of inputs.\n\n"
      "Instruction:\n"
      "{{ prompt }}\n\n"
      "{{ examples }}\n"
      "Analyze the student errors. Explain which parts of the instruction caused them and "
      "what the instruction is missing. Do not rewrite the instruction.\n\n"
      "Analysis:\n");
  return t;
}

const TemplateText& default_concat_template() {
  static const TemplateText t(
      "A student is completing a task that requires producing a text output from a text "
      "input. The student receives an instruction that describes how to produce the output "
      "given each input.\n"
      "The student has made some errors. Your task is to improve the instruction such that "
      "the student can fix the errors.\n\n"
      "Here are the past iterations of this variable:\n"
      "<PAST_ITERATIONS>{{ past_prompts }}</PAST_ITERATIONS>\n\n"
      "{{ examples }}\n"
      "Improve the instruction to fix the student errors. Clarify the instruction by adding "
      "few words or a short sentence. Be concise.\n\n"
      "Improved instruction:\n");
  return t;
}

std::string render_triples(std::span<const Triple> triples) {
  std::string successes;
  std::string errors;
  for (const Triple& t : triples) {
    if (t.correct) {
      successes += "Input: " + t.input + "\nCorrect Output: " + t.gold + "\n\n";
    } else {
      errors += "Input: " + t.input + "\nStudent Output: " + t.prediction +
                "\nCorrect Output: " + t.gold + "\n\n";
    }
  }
  std::string out;
  if (!successes.empty()) out += "Student successes:\n\n" + successes;
  if (!errors.empty()) out += "Student errors:\n\n" + errors;
  return out;
}

}  // namespace tsgdm::optimizer
