// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "tsgdm/common/error.hpp"

namespace tsgdm::optimizer {
namespace {

// Oracle: normalized geometric weights in closed form,
// alpha^(t-tau) (1 - alpha) / (1 - alpha^(t+1)), without summing terms.
double geometric_weight(double alpha, std::size_t t, std::size_t tau) {
  return std::pow(alpha, static_cast<double>(t - tau)) * (1.0 - alpha) /
         (1.0 - std::pow(alpha, static_cast<double>(t + 1)));
}

TEST(MomentumWeights, HandEvaluatedSpotValue) {
  // 0.36, 0.6, 1 over 1.96.
  const auto w = momentum_weights(0.6, 2);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_NEAR(w[0], 0.18367, 1e-5);
  EXPECT_NEAR(w[1], 0.30612, 1e-5);
  EXPECT_NEAR(w[2], 0.51020, 1e-5);
}

TEST(MomentumWeights, MatchesClosedFormGeometricSum) {
  for (double alpha : {0.05, 0.3, 0.5, 0.6, 0.9, 0.99}) {
    for (std::size_t t : {0u, 1u, 2u, 7u, 30u, 64u}) {
      const auto w = momentum_weights(alpha, t);
      for (std::size_t tau = 0; tau <= t; ++tau) {
        EXPECT_NEAR(w[tau], geometric_weight(alpha, t, tau), 1e-12)
            << "alpha=" << alpha << " t=" << t << " tau=" << tau;
      }
    }
  }
}

TEST(MomentumWeights, SingleRecordHasAllMass) {
  for (double alpha : {0.0, 0.4, 1.0}) {
    const auto w = momentum_weights(alpha, 0);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0], 1.0);
  }
}

TEST(MomentumWeights, DegenerateEnds) {
  const auto zero = momentum_weights(0.0, 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(zero[i], 0.0);
  EXPECT_EQ(zero[5], 1.0);
  const auto one = momentum_weights(1.0, 5);
  for (std::size_t i = 0; i <= 5; ++i) EXPECT_NEAR(one[i], 1.0 / 6.0, 1e-15);
}

TEST(MomentumWeights, RejectsOutOfRangeAlpha) {
  EXPECT_THROW(momentum_weights(-0.01, 2), DomainError);
  EXPECT_THROW(momentum_weights(1.01, 2), DomainError);
  EXPECT_THROW(momentum_weights(std::nan(""), 2), DomainError);
}

// Property sweep over random alpha in [0, 1] and every t <= 64.
TEST(MomentumWeights, PropertiesOverRandomAlpha) {
  RandomStream gen(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = gen.uniform();
    for (std::size_t t = 0; t <= 64; ++t) {
      const auto w = momentum_weights(alpha, t);
      ASSERT_EQ(w.size(), t + 1);
      const double total = std::accumulate(w.values().begin(), w.values().end(), 0.0);
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (std::size_t i = 0; i <= t; ++i) {
        EXPECT_GE(w[i], 0.0);
        if (i > 0 && alpha > 0.0 && alpha < 1.0) {
          EXPECT_LE(w[i - 1], w[i]);
          // Strict once the older weight has not underflowed to zero.
          if (w[i - 1] > 0.0) EXPECT_LT(w[i - 1], w[i]);
        }
      }
    }
  }
}

TEST(SampleSource, NeverReturnsZeroWeightIndex) {
  RandomStream rng(5);
  const WeightVector w({0.0, 0.5, 0.0, 0.5, 0.0});
  for (int i = 0; i < 5000; ++i) {
    const auto s = sample_source(w, rng);
    EXPECT_TRUE(s == 1 || s == 3);
  }
  const auto degenerate = momentum_weights(0.0, 9);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_source(degenerate, rng), 9u);
}

TEST(SampleSource, FrequenciesWithinBinomialBounds) {
  RandomStream gen(77);
  const int draws = 10000;
  for (int v = 0; v < 20; ++v) {
    const std::size_t n = 2 + gen.below(8);
    std::vector<double> raw(n);
    for (auto& x : raw) x = gen.uniform();
    const double s = std::accumulate(raw.begin(), raw.end(), 0.0);
    for (auto& x : raw) x /= s;
    const WeightVector w(raw);

    RandomStream rng = gen.derive({static_cast<std::uint64_t>(v)});
    std::vector<int> counts(n, 0);
    for (int i = 0; i < draws; ++i) ++counts[sample_source(w, rng)];
    for (std::size_t i = 0; i < n; ++i) {
      const double sd = std::sqrt(draws * raw[i] * (1 - raw[i]));
      EXPECT_NEAR(counts[i], draws * raw[i], 3 * sd + 1e-9) << "vector " << v << " index " << i;
    }
  }
}

TEST(SampleSource, EmptyWeightsThrow) {
  RandomStream rng(1);
  EXPECT_THROW(sample_source(WeightVector{}, rng), Error);
}

}  // namespace
}  // namespace tsgdm::optimizer
