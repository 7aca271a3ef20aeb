// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/variance/ema.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

#include "tsgdm/common/error.hpp"

namespace tsgdm::variance {
namespace {

void check_model(const EmaModel& model, bool allow_zero_sigma) {
  if (!(model.alpha > 0.0 && model.alpha <= 1.0)) {
    throw DomainError("EMA alpha must lie in (0, 1]");
  }
  const bool sigma_ok = allow_zero_sigma ? model.sigma >= 0.0 : model.sigma > 0.0;
  if (!sigma_ok) throw DomainError("sigma must be positive");
}

// Running mean and sum of squared deviations; merged with Chan's formula.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }

  double std_error() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

struct ChunkMoments {
  Moments squared_error;
  Moments estimate;
};

ChunkMoments simulate_chunk(const EmaModel& model, std::size_t trials, RandomStream rng) {
  ChunkMoments out;
  const double a = model.alpha;
  for (std::size_t i = 0; i < trials; ++i) {
    double y = model.mu + model.sigma * rng.normal();
    for (std::size_t step = 1; step <= model.horizon; ++step) {
      y = a * (model.mu + model.sigma * rng.normal()) + (1.0 - a) * y;
    }
    const double err = y - model.mu;
    out.squared_error.add(err * err);
    out.estimate.add(y);
  }
  return out;
}

}  // namespace

double ema_mse_theory(const EmaModel& model) {
  check_model(model, false);
  const double a = model.alpha;
  const double tail = std::pow(1.0 - a, 2.0 * static_cast<double>(model.horizon) + 1.0);
  return model.sigma * model.sigma * (a / (2.0 - a) + 2.0 / (2.0 - a) * tail);
}

SimulationResult simulate_ema(const EmaModel& model, std::size_t trials,
                              const RandomStream& rng, const SimulationOptions& options) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  check_model(model, options.allow_zero_sigma);

  const std::size_t chunk = std::max<std::size_t>(options.chunk_trials, 1);
  const std::size_t chunks = (trials + chunk - 1) / chunk;
  std::vector<ChunkMoments> parts(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t n = std::min(chunk, trials - c * chunk);
    parts[c] = simulate_chunk(
        model, n, rng.derive({static_cast<std::uint64_t>(StreamDomain::kSimulation), c}));
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, chunks);
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      }));
    }
    for (auto& job : jobs) job.get();
  }

  ChunkMoments total;
  for (const auto& p : parts) {
    total.squared_error.merge(p.squared_error);
    total.estimate.merge(p.estimate);
  }
  SimulationResult r;
  r.trials = trials;
  r.empirical_mse = total.squared_error.mean;
  r.std_error = total.squared_error.std_error();
  r.mean_estimate = total.estimate.mean;
  r.mean_std_error = total.estimate.std_error();
  return r;
}

std::size_t VarianceReport::flagged_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const VarianceRow& r) { return r.flagged; }));
}

VarianceReport variance_report(const std::vector<double>& alphas,
                               const std::vector<std::size_t>& horizons, double sigma,
                               std::size_t trials, const RandomStream& rng,
                               const SimulationOptions& options) {
  if (alphas.empty() || horizons.empty()) throw DomainError("variance grid axes must be nonempty");
  VarianceReport report;
  report.sigma = sigma;
  report.trials = trials;
  report.seed = rng.key();

  std::uint64_t cell = 0;
  for (double alpha : alphas) {
    for (std::size_t t : horizons) {
      const EmaModel model{0.0, sigma, alpha, t};
      VarianceRow row;
      row.alpha = alpha;
      row.horizon = t;
      row.theory_mse = ema_mse_theory(model);
      const SimulationResult sim = simulate_ema(model, trials, rng.derive({cell++}), options);
      row.empirical_mse = sim.empirical_mse;
      row.std_error = sim.std_error;
      row.baseline_mse = sigma * sigma;
      row.flagged =
          std::abs(row.empirical_mse - row.theory_mse) > report.flag_sigmas * row.std_error;
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_csv(const VarianceReport& report, std::ostream& out) {
  out << "alpha,t,theory_mse,empirical_mse,std_error,baseline_mse,flagged\n";
  char buf[256];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%d\n", r.alpha, r.horizon,
                  r.theory_mse, r.empirical_mse, r.std_error, r.baseline_mse,
                  r.flagged ? 1 : 0);
    out << buf;
  }
}

nlohmann::json summary_json(const VarianceReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"alpha", r.alpha},
                    {"t", r.horizon},
                    {"theory_mse", r.theory_mse},
                    {"empirical_mse", r.empirical_mse},
                    {"std_error", r.std_error},
                    {"baseline_mse", r.baseline_mse},
                    {"flagged", r.flagged}});
  }
  return {{"alpha_convention",
           "alpha weighs the newest draw: Y_t = alpha*draw + (1-alpha)*Y_{t-1}. The prompt "
           "optimizer uses the opposite convention, where alpha^(t-tau) decays the weight of "
           "older prompts."},
          {"sigma", report.sigma},
          {"trials", report.trials},
          {"seed", report.seed},
          {"flag_rule", "|empirical - theory| > " + std::to_string(report.flag_sigmas) +
                            " * std_error"},
          {"flagged_cells", report.flagged_count()},
          {"all_theory_below_baseline",
           std::all_of(report.rows.begin(), report.rows.end(),
                       [](const VarianceRow& r) { return r.theory_mse < r.baseline_mse; })},
          {"rows", rows}};
}

}  // namespace tsgdm::variance
