// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsgdm/common/random.hpp"

namespace tsgdm::variance {

// Scalar model of prompt generation: every LLM draw is mu + eps with
// eps ~ N(0, sigma^2). The baseline keeps the latest draw,
//   X_t = draw,
// the moving-average estimator blends it into the running estimate,
//   Y_0 = draw,   Y_t = alpha * draw + (1 - alpha) * Y_{t-1}.
//
// Here alpha weighs the NEW draw. The prompt optimizer's momentum alpha
// weighs the OLD prompts instead; the two are not interchangeable.
struct EmaModel {
  double mu = 0.0;
  double sigma = 1.0;
  double alpha = 0.5;
  std::size_t horizon = 0;
};

// Closed-form E[(Y_t - mu)^2] = sigma^2 [alpha/(2-alpha) + 2/(2-alpha) (1-alpha)^(2t+1)].
// Throws DomainError unless 0 < alpha <= 1 and sigma > 0.
double ema_mse_theory(const EmaModel& model);

struct SimulationOptions {
  // Admit sigma == 0 (noiseless process). Test use only.
  bool allow_zero_sigma = false;
  std::size_t workers = 1;
  // Trials per substream. Fixed chunking keeps results independent of `workers`.
  std::size_t chunk_trials = 4096;
};

struct SimulationResult {
  std::size_t trials = 0;
  double empirical_mse = 0.0;
  // Standard error of empirical_mse.
  double std_error = 0.0;
  double mean_estimate = 0.0;
  double mean_std_error = 0.0;
};

// Monte Carlo over `trials` independent trajectories Y_0..Y_t.
// Throws DomainError on trials < 1 or an invalid model.
SimulationResult simulate_ema(const EmaModel& model, std::size_t trials,
                              const RandomStream& rng, const SimulationOptions& options = {});

struct VarianceRow {
  double alpha = 0.0;
  std::size_t horizon = 0;
  double theory_mse = 0.0;
  double empirical_mse = 0.0;
  double std_error = 0.0;
  double baseline_mse = 0.0;
  // |empirical - theory| > flag_sigmas * std_error
  bool flagged = false;
};

struct VarianceReport {
  double sigma = 1.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double flag_sigmas = 4.0;
  std::vector<VarianceRow> rows;

  std::size_t flagged_count() const;
};

// Full alphas x horizons grid, row-major in alpha. Each cell simulates on
// its own substream of `rng`.
VarianceReport variance_report(const std::vector<double>& alphas,
                               const std::vector<std::size_t>& horizons, double sigma,
                               std::size_t trials, const RandomStream& rng,
                               const SimulationOptions& options = {});

// Comma-separated table with a header row.
void write_csv(const VarianceReport& report, std::ostream& out);
// Summary document: grid, flags and a note on the two alpha conventions.
nlohmann::json summary_json(const VarianceReport& report);

}  // namespace tsgdm::variance
