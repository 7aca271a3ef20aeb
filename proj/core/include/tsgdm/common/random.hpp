// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace tsgdm {

// Seeded random source whose output is identical on every platform.
//
// The engine is std::mt19937_64, whose sequence is fixed by the standard.
// Distributions are implemented here rather than taken from <random>, since
// libstdc++ and libc++ disagree on std::uniform_real_distribution and
// std::normal_distribution.
//
// Substreams: derive() hashes the parent key together with a list of
// integers (e.g. iteration and candidate index), so parallel consumers get
// independent streams that do not depend on execution order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream derive(std::initializer_list<std::uint64_t> path) const;

  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer on [0, n). n must be positive.
  std::size_t below(std::size_t n);

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Well-known substream domains.
enum class StreamDomain : std::uint64_t {
  kCandidate = 1,
  kBatch = 2,
  kTrainSubset = 3,
  kSimulation = 4,
};

}  // namespace tsgdm
