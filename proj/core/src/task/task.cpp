// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/task/task.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "tsgdm/common/error.hpp"

namespace tsgdm::task {

void TaskBinding::validate() const {
  if (initial_prompt.empty()) throw Error("task '" + name + "': initial prompt is empty");

  auto check_labels = [&](const std::vector<LabeledExample>& split, const char* split_name) {
    if (label_set.empty()) return;
    for (const auto& ex : split) {
      if (std::find(label_set.begin(), label_set.end(), ex.gold_label) == label_set.end()) {
        throw Error("task '" + name + "': " + split_name + " label '" + ex.gold_label +
                    "' not in label set");
      }
    }
  };
  check_labels(train, "train");
  check_labels(holdout, "holdout");
  check_labels(test, "test");

  std::unordered_set<std::string> seen_train, seen_holdout;
  for (const auto& ex : train) seen_train.insert(ex.input_text);
  for (const auto& ex : holdout) {
    if (seen_train.count(ex.input_text)) {
      throw Error("task '" + name + "': holdout input also in train: " + ex.input_text);
    }
    seen_holdout.insert(ex.input_text);
  }
  for (const auto& ex : test) {
    if (seen_train.count(ex.input_text) || seen_holdout.count(ex.input_text)) {
      throw Error("task '" + name + "': test input overlaps another split: " + ex.input_text);
    }
  }
}

std::vector<LabeledExample> load_dataset(const std::filesystem::path& path,
                                         const std::vector<std::string>& label_set) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path.string());

  std::vector<LabeledExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    LabeledExample ex;
    try {
      const auto j = nlohmann::json::parse(line);
      ex.input_text = j.at("text").get<std::string>();
      ex.gold_label = j.at("label").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (ex.input_text.empty()) throw ParseError(line_no, "empty text");
    if (!label_set.empty() &&
        std::find(label_set.begin(), label_set.end(), ex.gold_label) == label_set.end()) {
      throw LabelError(line_no, ex.gold_label);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<LabeledExample> sample_batch(const std::vector<LabeledExample>& pool, std::size_t m,
                                         RandomStream& rng, bool with_replacement) {
  if (m == 0) throw SizeError("batch size must be positive");
  if (pool.empty()) throw SizeError("cannot sample from an empty pool");
  std::vector<LabeledExample> batch;
  batch.reserve(m);
  if (with_replacement) {
    for (std::size_t i = 0; i < m; ++i) batch.push_back(pool[rng.below(pool.size())]);
    return batch;
  }
  if (m > pool.size()) {
    throw SizeError("batch size " + std::to_string(m) + " exceeds pool of " +
                    std::to_string(pool.size()) + " without replacement");
  }
  // Partial Fisher-Yates over indices.
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
    batch.push_back(pool[idx[i]]);
  }
  return batch;
}

}  // namespace tsgdm::task
