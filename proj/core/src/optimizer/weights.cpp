// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/weights.hpp"

#include <cmath>

#include "tsgdm/common/error.hpp"

namespace tsgdm::optimizer {

WeightVector momentum_weights(double alpha, std::size_t t) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("momentum alpha must lie in [0, 1]");
  }
  std::vector<double> w(t + 1);
  for (std::size_t tau = 0; tau <= t; ++tau) {
    // std::pow(0, 0) == 1, which gives the alpha = 0 convention.
    w[tau] = std::pow(alpha, static_cast<double>(t - tau));
  }
  // Oldest entries are the smallest; summing them first limits rounding.
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return WeightVector(std::move(w));
}

std::size_t sample_source(const WeightVector& weights, RandomStream& rng) {
  if (weights.size() == 0) throw EmptyHistoryError("cannot sample from empty weights");
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cumulative += weights[i];
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum just below u.
  return last_positive;
}

}  // namespace tsgdm::optimizer
