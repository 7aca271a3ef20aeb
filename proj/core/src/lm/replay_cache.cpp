// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/lm/replay_cache.hpp"

#include <fstream>
#include <mutex>

#include "tsgdm/common/error.hpp"

namespace tsgdm::lm {

std::string_view to_string(CacheMode mode) {
  switch (mode) {
    case CacheMode::kRecord:
      return "record";
    case CacheMode::kReplay:
      return "replay";
    case CacheMode::kPassthrough:
      return "passthrough";
  }
  return "passthrough";
}

CacheMode cache_mode_from_string(std::string_view text) {
  if (text == "record") return CacheMode::kRecord;
  if (text == "replay") return CacheMode::kReplay;
  if (text == "passthrough") return CacheMode::kPassthrough;
  throw ConfigError("backend.cache.mode", "expected record, replay or passthrough");
}

ReplayCache::ReplayCache(ReplayCache&& other) noexcept
    : mode_(other.mode_),
      entries_(std::move(other.entries_)),
      cursor_(std::move(other.cursor_)) {}

ReplayCache ReplayCache::load(const std::filesystem::path& path, CacheMode mode) {
  ReplayCache cache(mode);
  std::ifstream in(path);
  if (!in) return cache;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      cache.entries_[j.at("digest").get<std::string>()] =
          j.at("results").get<std::vector<CompletionResult>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("cache file: ") + e.what());
    }
  }
  return cache;
}

void ReplayCache::save(const std::filesystem::path& path) const {
  std::shared_lock lock(mutex_);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write cache file " + path.string());
  for (const auto& [digest, results] : entries_) {
    out << nlohmann::json{{"digest", digest}, {"results", results}}.dump() << '\n';
  }
}

std::size_t ReplayCache::entry_count() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void ReplayCache::rewind() {
  std::unique_lock lock(mutex_);
  cursor_.clear();
}

CompletionResult ReplayCache::complete(Backend* inner, const CompletionRequest& request) {
  if (mode_ == CacheMode::kPassthrough) {
    if (inner == nullptr) throw GatewayError("passthrough cache has no inner backend");
    return inner->complete(request);
  }

  const std::string digest = request_digest(request);

  if (mode_ == CacheMode::kReplay) {
    // The cursor map is mutated, so take the exclusive lock.
    std::unique_lock lock(mutex_);
    auto it = entries_.find(digest);
    if (it == entries_.end() || it->second.empty()) {
      throw CacheMissError("no cached result for digest " + digest + " (tag '" +
                           request.request_tag + "')");
    }
    std::size_t& slot = cursor_[digest];
    const auto& results = it->second;
    const CompletionResult& hit = results[std::min(slot, results.size() - 1)];
    ++slot;
    return hit;
  }

  if (inner == nullptr) throw GatewayError("record cache has no inner backend");
  std::size_t slot;
  {
    std::unique_lock lock(mutex_);
    slot = cursor_[digest]++;
  }
  CompletionResult result = inner->complete(request);
  {
    std::unique_lock lock(mutex_);
    auto& results = entries_[digest];
    if (results.size() <= slot) results.resize(slot + 1);
    results[slot] = result;
  }
  return result;
}

CompletionResult cached_complete(ReplayCache& cache, Backend& inner,
                                 const CompletionRequest& request) {
  return cache.complete(&inner, request);
}

}  // namespace tsgdm::lm
