// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tsgdm/lm/completion.hpp"

namespace tsgdm::lm {

enum class CacheMode { kRecord, kReplay, kPassthrough };

std::string_view to_string(CacheMode mode);
CacheMode cache_mode_from_string(std::string_view text);

// Record/replay store keyed by request_digest().
//
// One entry per digest. An entry holds the results of successive identical
// requests in call order: the n-th identical request of a session records
// (or replays) slot n. Sampling at temperature > 0 makes repeated identical
// requests legitimately differ, and this keeps replay faithful to the
// recorded run. Replaying past the recorded slots returns the last slot.
//
// Persisted as one JSON object per line, sorted by digest, so the file is
// byte-stable for a given set of entries.
class ReplayCache {
 public:
  explicit ReplayCache(CacheMode mode) : mode_(mode) {}

  // Missing file yields an empty cache.
  static ReplayCache load(const std::filesystem::path& path, CacheMode mode);
  void save(const std::filesystem::path& path) const;

  CacheMode mode() const noexcept { return mode_; }
  std::size_t entry_count() const;

  // Restart occurrence counting, as for a fresh process.
  void rewind();

  // In replay mode a missing digest throws CacheMissError; `inner` is never
  // called and may be null.
  CompletionResult complete(Backend* inner, const CompletionRequest& request);

  ReplayCache(ReplayCache&& other) noexcept;
  ReplayCache(const ReplayCache&) = delete;
  ReplayCache& operator=(const ReplayCache&) = delete;

 private:
  CacheMode mode_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::vector<CompletionResult>> entries_;
  std::map<std::string, std::size_t> cursor_;
};

CompletionResult cached_complete(ReplayCache& cache, Backend& inner,
                                 const CompletionRequest& request);

// Backend adapter that routes every call through a cache.
class CachingBackend final : public Backend {
 public:
  CachingBackend(ReplayCache& cache, Backend* inner) : cache_(cache), inner_(inner) {}
  CompletionResult complete(const CompletionRequest& request) override {
    return cache_.complete(inner_, request);
  }

 private:
  ReplayCache& cache_;
  Backend* inner_;
};

}  // namespace tsgdm::lm
