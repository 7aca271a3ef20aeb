// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsgdm/common/random.hpp"

namespace tsgdm::optimizer {

// Mixture weights over a prompt history, oldest record first.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

// Exponential-moving-average weights for a history of t + 1 records:
//
//   w_tau = alpha^(t - tau) / sum_{s=0..t} alpha^(t - s),   tau = 0..t
//
// Record t (the newest) always has the largest weight when alpha < 1.
// alpha = 0 puts all mass on record t (0^0 = 1); alpha = 1 is uniform.
// Throws DomainError unless 0 <= alpha <= 1.
WeightVector momentum_weights(double alpha, std::size_t t);

// Draws an index with probability proportional to its weight (inverse CDF
// on one uniform variate). Zero-weight indices are never returned.
std::size_t sample_source(const WeightVector& weights, RandomStream& rng);

}  // namespace tsgdm::optimizer
