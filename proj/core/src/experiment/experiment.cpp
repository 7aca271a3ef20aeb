// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/experiment/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>

#include "tsgdm/common/error.hpp"
#include "tsgdm/lm/metered_backend.hpp"
#include "tsgdm/lm/remote_backend.hpp"
#include "tsgdm/lm/replay_cache.hpp"
#include "tsgdm/lm/scripted_backend.hpp"
#include "tsgdm/task/presets.hpp"
#include "tsgdm/task/score.hpp"

namespace tsgdm::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

json metric_json(const MetricSummary& m) { return {{"mean", m.mean}, {"std", m.std}}; }

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string describe(const std::exception& e) {
  std::string text = e.what();
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    text += ": " + describe(inner);
  } catch (...) {
  }
  return text;
}

TrialOutcome run_trial(const ExperimentConfig& config, const task::TaskBinding& task,
                       lm::Backend& backend, int index) {
  TrialOutcome outcome;
  outcome.index = index;
  outcome.seed = config.seed_base + static_cast<std::uint64_t>(index);

  optimizer::RunConfig run = config.run;
  run.seed = outcome.seed;

  const auto& bc = config.backend;
  std::optional<lm::ReplayCache> cache;
  fs::path cache_path;
  if (bc.cache_mode) {
    cache_path = bc.cache_dir / ("trial_" + std::to_string(outcome.seed) + ".jsonl");
    cache.emplace(lm::ReplayCache::load(cache_path, *bc.cache_mode));
  }
  std::optional<lm::CachingBackend> caching;
  lm::Backend* chain = &backend;
  if (cache) {
    caching.emplace(*cache, *bc.cache_mode == lm::CacheMode::kReplay ? nullptr : &backend);
    chain = &*caching;
  }
  lm::MeteredBackend budget(*chain, bc.max_gateway_calls);

  task::ScoreOptions so;
  so.kind = task.kind;
  so.label_set = task.label_set;
  so.max_new_tokens = run.forward_max_tokens;
  so.workers = bc.score_workers;
  so.forward_template = &task.forward_template;
  so.tag_prefix = "holdout";
  task::AccuracyScorer holdout(task.holdout, budget, so);

  try {
    outcome.result = optimizer::run_tsgd(run, task, budget, holdout);
    if (!task.test.empty()) {
      so.tag_prefix = "test";
      outcome.test_score = task::score_prompt(outcome.result->best_prompt, task.test, budget, so);
    }
    outcome.final_metric = outcome.test_score.value_or(outcome.result->best_score);
    outcome.completed = true;
  } catch (const optimizer::RunError& e) {
    outcome.error = describe(e);
    outcome.result = e.partial();
  } catch (const std::exception& e) {
    outcome.error = describe(e);
  }

  if (cache && *bc.cache_mode == lm::CacheMode::kRecord) {
    fs::create_directories(cache_path.parent_path().empty() ? fs::path(".")
                                                            : cache_path.parent_path());
    cache->save(cache_path);
  }
  return outcome;
}

json trial_json(const TrialOutcome& t) {
  // No trial index: rerunning one seed alone must reproduce this file.
  json j{{"seed", t.seed},
         {"status", t.completed ? "completed" : "failed"},
         {"test_score", t.test_score ? json(*t.test_score) : json(nullptr)},
         {"final_metric", t.completed ? json(t.final_metric) : json(nullptr)},
         {"result", t.result ? json(*t.result) : json(nullptr)}};
  if (!t.completed) j["error"] = t.error;
  return j;
}

void write_outputs(const ExperimentSummary& summary, const fs::path& dir) {
  fs::create_directories(dir);
  auto log = open_output(dir / "run_log.jsonl");
  auto curves = open_output(dir / "curves.csv");
  curves << "trial,seed,iteration,holdout_score,selected_candidate_index,lm_calls_cumulative,"
            "tokens_cumulative\n";
  for (const auto& t : summary.outcomes) {
    open_output(dir / ("trial_" + std::to_string(t.index) + ".json")) << trial_json(t).dump(2)
                                                                      << '\n';
    if (!t.result) continue;
    for (const auto& it : t.result->per_iteration) {
      json line = it;
      line["trial"] = t.index;
      line["seed"] = t.seed;
      log << line.dump() << '\n';
      curves << t.index << ',' << t.seed << ',' << it.iteration << ','
             << format_number(it.holdout_score) << ','
             << (it.selected_candidate ? std::to_string(*it.selected_candidate) : "") << ','
             << it.lm_calls_cumulative << ',' << it.tokens_cumulative << '\n';
    }
  }
  open_output(dir / "summary.json") << to_json(summary).dump(2) << '\n';
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

std::unique_ptr<lm::Backend> make_backend(const BackendConfig& config) {
  if (config.kind == BackendKind::kRemote) {
    return std::make_unique<lm::RemoteBackend>(config.remote);
  }
  return std::make_unique<lm::ScriptedBackend>(lm::ScriptedBackend::from_json(config.scripted));
}

json to_json(const ExperimentSummary& s) {
  json failures = json::array();
  for (const auto& t : s.outcomes) {
    if (!t.completed) failures.push_back({{"trial", t.index}, {"seed", t.seed}, {"error", t.error}});
  }
  return {{"task", s.task},
          {"trials", s.trials},
          {"completed", s.completed},
          {"failed", s.failed},
          {"best_holdout", metric_json(s.best_holdout)},
          {"final_metric", metric_json(s.final_metric)},
          {"lm_calls", metric_json(s.lm_calls)},
          {"iterations", metric_json(s.iterations)},
          {"failed_trials", failures},
          {"warnings", s.warnings}};
}

ExperimentSummary run_experiment(const ExperimentConfig& config, const task::TaskBinding& task,
                                 lm::Backend& backend, std::ostream* progress) {
  ExperimentSummary summary;
  summary.task = task.name;
  summary.trials = config.trials;
  if (task.test.empty()) {
    summary.warnings.push_back("no test split; final_metric is the best holdout score");
  }

  std::vector<double> best, final_metric, calls, iterations;
  for (int i = 0; i < config.trials; ++i) {
    TrialOutcome t = run_trial(config, task, backend, i);
    if (t.completed) {
      ++summary.completed;
      best.push_back(t.result->best_score);
      final_metric.push_back(t.final_metric);
      calls.push_back(static_cast<double>(t.result->total_lm_calls));
      iterations.push_back(static_cast<double>(t.result->per_iteration.size() - 1));
    } else {
      ++summary.failed;
    }
    if (progress) {
      *progress << "trial " << i << " seed " << t.seed << ": ";
      if (t.completed) {
        *progress << "best holdout " << format_number(t.result->best_score) << ", final "
                  << format_number(t.final_metric) << '\n';
      } else {
        *progress << "FAILED (" << t.error << ")\n";
      }
    }
    summary.outcomes.push_back(std::move(t));
  }
  if (summary.failed > 0) {
    summary.warnings.push_back(std::to_string(summary.failed) +
                               " trial(s) failed; statistics cover completed trials only");
  }
  summary.best_holdout = summarize(best);
  summary.final_metric = summarize(final_metric);
  summary.lm_calls = summarize(calls);
  summary.iterations = summarize(iterations);

  write_outputs(summary, config.output_dir);
  return summary;
}

bool SweepResult::all_completed() const {
  return std::all_of(points.begin(), points.end(),
                     [](const SweepPoint& p) { return p.summary.all_completed(); });
}

SweepResult run_sweep(const ExperimentConfig& config, const task::TaskBinding& task,
                      lm::Backend& backend, std::ostream* progress) {
  if (!config.sweep) throw ConfigError("sweep", "no sweep configured");
  SweepResult result;
  result.axis = config.sweep->axis;
  std::vector<double> values = config.sweep->values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const std::string axis(to_string(result.axis));
  for (double v : values) {
    ExperimentConfig point = with_axis_value(config, result.axis, v);
    point.sweep.reset();
    const std::string sub = axis + "_" + format_number(v);
    point.output_dir = config.output_dir / sub;
    point.backend.cache_dir = config.backend.cache_dir / sub;
    if (progress) *progress << "== " << axis << " = " << format_number(v) << '\n';
    result.points.push_back({v, run_experiment(point, task, backend, progress)});
  }

  fs::create_directories(config.output_dir);
  auto csv = open_output(config.output_dir / "sweep.csv");
  csv << axis << ",completed,failed,best_holdout_mean,best_holdout_std,final_mean,final_std\n";
  json rows = json::array();
  for (const auto& p : result.points) {
    const auto& s = p.summary;
    csv << format_number(p.value) << ',' << s.completed << ',' << s.failed << ','
        << format_number(s.best_holdout.mean) << ',' << format_number(s.best_holdout.std) << ','
        << format_number(s.final_metric.mean) << ',' << format_number(s.final_metric.std) << '\n';
    json row = to_json(s);
    row["value"] = p.value;
    rows.push_back(std::move(row));
  }
  open_output(config.output_dir / "sweep.json")
      << json{{"axis", axis}, {"points", rows}}.dump(2) << '\n';
  return result;
}

}  // namespace tsgdm::experiment
