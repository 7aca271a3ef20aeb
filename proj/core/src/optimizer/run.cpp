// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/optimizer/run.hpp"

#include <exception>

#include "tsgdm/lm/metered_backend.hpp"
#include "tsgdm/optimizer/generation.hpp"
#include "tsgdm/optimizer/update.hpp"
#include "tsgdm/task/forward.hpp"

namespace tsgdm::optimizer {

std::string_view to_string(StopReason reason) {
  return reason == StopReason::kEarlyStopped ? "early_stopped" : "max_iterations";
}

void to_json(nlohmann::json& j, const IterationLog& log) {
  j = nlohmann::json{
      {"iteration", log.iteration},
      {"selected_prompt", log.selected_prompt},
      {"holdout_score", log.holdout_score},
      {"candidate_scores", log.candidate_scores},
      {"selected_candidate_index",
       log.selected_candidate ? nlohmann::json(*log.selected_candidate) : nlohmann::json(nullptr)},
      {"lm_calls_cumulative", log.lm_calls_cumulative},
      {"tokens_cumulative", log.tokens_cumulative}};
}

void to_json(nlohmann::json& j, const RunResult& result) {
  j = nlohmann::json{{"best_prompt", result.best_prompt},
                     {"best_score", result.best_score},
                     {"best_iteration", result.best_iteration},
                     {"stop_reason", std::string(to_string(result.stop_reason))},
                     {"total_lm_calls", result.total_lm_calls},
                     {"total_tokens", result.total_tokens},
                     {"per_iteration", result.per_iteration},
                     {"history", result.history}};
}

namespace {

class RunState {
 public:
  RunState(const RunConfig& config, const task::TaskBinding& task, lm::Backend& lm,
           task::ScoreFunction& holdout, const IterationCallback& on_iteration)
      : config_(config),
        task_(task),
        lm_(lm),
        holdout_(holdout),
        on_iteration_(on_iteration),
        master_(config.seed),
        holdout_base_(holdout.usage()) {}

  void run() {
    config_.validate();
    build_pool();

    std::string current = task_.initial_prompt;
    double current_score = holdout_.score(current);
    log_iteration(0, current, current_score, {}, std::nullopt);

    int stale = 0;
    for (int t = 0; t < config_.total_iterations; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      history_.append(make_record(ti, current, current_score));

      UpdateResult update = step(ti);
      const double next_score = update.candidate_scores.empty()
                                    ? holdout_.score(update.next_prompt)
                                    : update.candidate_scores[update.selected_index];

      const double best_before = result_.best_score;
      log_iteration(ti + 1, update.next_prompt, next_score, std::move(update.candidate_scores),
                    update.selected_index);
      current = std::move(update.next_prompt);
      current_score = next_score;

      stale = next_score > best_before ? 0 : stale + 1;
      if (stale >= config_.patience) {
        result_.stop_reason = StopReason::kEarlyStopped;
        break;
      }
    }
  }

  RunResult& result() {
    result_.history.assign(history_.records().begin(), history_.records().end());
    return result_;
  }

 private:
  void build_pool() {
    const auto& train = task_.train;
    if (config_.train_size && static_cast<std::size_t>(*config_.train_size) < train.size()) {
      RandomStream rng =
          master_.derive({static_cast<std::uint64_t>(StreamDomain::kTrainSubset)});
      pool_ = task::sample_batch(train, static_cast<std::size_t>(*config_.train_size), rng,
                                 false);
    } else if (config_.train_size &&
               static_cast<std::size_t>(*config_.train_size) > train.size()) {
      throw SizeError("train_size " + std::to_string(*config_.train_size) +
                      " exceeds the train split of " + std::to_string(train.size()));
    } else {
      pool_ = train;
    }
  }

  PromptRecord make_record(std::size_t t, const std::string& prompt, double score) {
    RandomStream rng = master_.derive({static_cast<std::uint64_t>(StreamDomain::kBatch), t});
    const auto batch = task::sample_batch(pool_, static_cast<std::size_t>(config_.batch_size),
                                          rng, config_.batch_with_replacement);

    PromptRecord record;
    record.iteration = t;
    record.prompt_text = prompt;
    record.holdout_score = score;
    record.batch_triples.reserve(batch.size());
    const std::string tag = "iter" + std::to_string(t) + "/forward";
    for (std::size_t i = 0; i < batch.size(); ++i) {
      task::PredictOptions po;
      po.max_new_tokens = config_.forward_max_tokens;
      po.request_tag = tag + std::to_string(i);
      po.forward_template = &task_.forward_template;
      const auto p = task::predict(metered_, prompt, batch[i].input_text, task_.label_set,
                                   task_.kind, po);
      record.batch_triples.push_back({batch[i].input_text, batch[i].gold_label,
                                      trim(p.raw), task::is_correct(p, batch[i].gold_label,
                                                                    task_.kind)});
    }

    const auto& gen = config_.generation;
    if (gen.mode == GenerationMode::kCase2Gradient) {
      record.gradient_text = compute_textual_gradient(record, *gen.analyze_template, metered_,
                                                      gen, "iter" + std::to_string(t));
    }
    return record;
  }

  UpdateResult step(std::size_t t) {
    const auto& gen = config_.generation;
    if (gen.mode == GenerationMode::kConcatBaseline) {
      return update_concat(history_, gen, holdout_, master_, metered_, t);
    }
    if (config_.use_momentum) {
      return update_mom(history_, gen, holdout_, master_, metered_, t);
    }
    return update_vanilla(history_.back(), gen, holdout_, master_, metered_, t);
  }

  void log_iteration(std::size_t iteration, const std::string& prompt, double score,
                     std::vector<double> candidate_scores,
                     std::optional<std::size_t> selected) {
    const lm::UsageSnapshot own = metered_.usage();
    const lm::UsageSnapshot scorer = holdout_.usage();
    IterationLog log;
    log.iteration = iteration;
    log.selected_prompt = prompt;
    log.holdout_score = score;
    log.candidate_scores = std::move(candidate_scores);
    log.selected_candidate = selected;
    log.lm_calls_cumulative = own.calls + scorer.calls - holdout_base_.calls;
    log.tokens_cumulative = own.prompt_tokens + own.completion_tokens + scorer.prompt_tokens +
                            scorer.completion_tokens - holdout_base_.prompt_tokens -
                            holdout_base_.completion_tokens;

    result_.total_lm_calls = log.lm_calls_cumulative;
    result_.total_tokens = log.tokens_cumulative;
    if (result_.per_iteration.empty() || score > result_.best_score) {
      result_.best_score = score;
      result_.best_prompt = prompt;
      result_.best_iteration = iteration;
    }
    result_.per_iteration.push_back(std::move(log));
    if (on_iteration_) on_iteration_(result_.per_iteration.back());
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  const RunConfig& config_;
  const task::TaskBinding& task_;
  lm::Backend& lm_;
  task::ScoreFunction& holdout_;
  const IterationCallback& on_iteration_;
  RandomStream master_;
  lm::UsageSnapshot holdout_base_;
  lm::MeteredBackend metered_{lm_};
  std::vector<task::LabeledExample> pool_;
  OptimizerHistory history_;
  RunResult result_;
};

}  // namespace

RunResult run_tsgd(const RunConfig& config, const task::TaskBinding& task, lm::Backend& lm,
                   task::ScoreFunction& holdout, const IterationCallback& on_iteration) {
  RunState state(config, task, lm, holdout, on_iteration);
  try {
    state.run();
  } catch (const std::exception& e) {
    std::throw_with_nested(RunError(std::string("run failed: ") + e.what(), state.result()));
  }
  return std::move(state.result());
}

}  // namespace tsgdm::optimizer
