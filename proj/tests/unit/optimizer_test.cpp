// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include "test_support.hpp"
#include "tsgdm/common/error.hpp"
#include "tsgdm/lm/scripted_backend.hpp"
#include "tsgdm/optimizer/generation.hpp"
#include "tsgdm/optimizer/history.hpp"
#include "tsgdm/optimizer/run.hpp"
#include "tsgdm/optimizer/templates.hpp"
#include "tsgdm/optimizer/update.hpp"
#include "tsgdm/optimizer/weights.hpp"
#include "tsgdm/task/score.hpp"

namespace tsgdm::optimizer {
namespace {

using lm::FinishReason;
using lm::ScriptedBackend;

PromptRecord make_record(std::size_t iteration, std::string prompt,
                         std::optional<std::string> gradient = std::nullopt) {
  PromptRecord r;
  r.iteration = iteration;
  r.prompt_text = std::move(prompt);
  r.gradient_text = std::move(gradient);
  r.batch_triples = {{"in" + std::to_string(iteration), "positive", "negative", false},
                     {"ok" + std::to_string(iteration), "negative", "negative", true}};
  return r;
}

OptimizerHistory make_history(std::size_t n, bool with_gradient = false) {
  OptimizerHistory h;
  for (std::size_t i = 0; i < n; ++i) {
    h.append(make_record(i, "PROMPT_" + std::to_string(i),
                         with_gradient ? std::optional<std::string>("GRAD_" + std::to_string(i))
                                       : std::nullopt));
  }
  return h;
}

GenerationParams small_params(int candidates = 1) {
  GenerationParams g;
  g.candidates = candidates;
  g.max_total_tokens = 30;
  g.block_tokens = 10;
  return g;
}

// Numbered answers for refinement requests, "positive" for everything else.
class SequenceBackend final : public lm::Backend {
 public:
  lm::CompletionResult complete(const lm::CompletionRequest& r) override {
    std::lock_guard lock(mutex_);
    if (r.prompt_text.find("Improved instruction:") != std::string::npos) {
      return {"P" + std::to_string(next_++), FinishReason::kStop, 1, 1};
    }
    return {"positive", FinishReason::kStop, 1, 1};
  }

 private:
  std::mutex mutex_;
  int next_ = 1;
};

TEST(History, AppendEnforcesIterationOrder) {
  OptimizerHistory h;
  h.append(make_record(0, "a"));
  EXPECT_THROW(h.append(make_record(2, "c")), Error);
  h.append(make_record(1, "b"));
  EXPECT_EQ(h.size(), 2u);
  EXPECT_EQ(h.back().prompt_text, "b");
}

TEST(RenderTriples, SuccessesThenErrors) {
  const std::vector<Triple> t{{"x1", "a", "b", false}, {"x2", "a", "a", true}};
  EXPECT_EQ(render_triples(t),
            "Student successes:\n\nInput: x2\nCorrect Output: a\n\n"
            "Student errors:\n\nInput: x1\nStudent Output: b\nCorrect Output: a\n\n");
  EXPECT_EQ(render_triples({}), "");
}

TEST(GenerateBlocks, RequestsCeilBlocksWithRemainder) {
  ScriptedBackend lm("tok ", FinishReason::kLength);
  auto g = small_params();
  g.max_total_tokens = 25;
  g.block_tokens = 10;
  const auto out = generate_blocks(g, lm, [](std::size_t b) { return "ctx" + std::to_string(b); },
                                   "pre");
  EXPECT_EQ(out, "tok tok tok ");
  const auto log = lm.call_log();
  ASSERT_EQ(log.size(), 3u);
  EXPECT_EQ(log[0].max_new_tokens, 10);
  EXPECT_EQ(log[1].max_new_tokens, 10);
  EXPECT_EQ(log[2].max_new_tokens, 5);
  EXPECT_EQ(log[0].assistant_prefix, "");
  EXPECT_EQ(log[1].assistant_prefix, "tok ");
  EXPECT_EQ(log[2].assistant_prefix, "tok tok ");
  EXPECT_EQ(log[2].prompt_text, "ctx2");
  EXPECT_EQ(log[1].request_tag, "pre/block1");
  EXPECT_EQ(log[0].temperature, g.temperature);
}

TEST(GenerateBlocks, DefaultBudgetIsTenBlocksOfTen) {
  ScriptedBackend lm("w ", FinishReason::kLength);
  GenerationParams g;
  generate_blocks(g, lm, [](std::size_t) { return "c"; }, "");
  EXPECT_EQ(lm.call_count(), 10u);
  for (const auto& r : lm.call_log()) EXPECT_EQ(r.max_new_tokens, 10);
}

TEST(GenerateBlocks, StopsOnStopOrEos) {
  for (auto finish : {FinishReason::kStop, FinishReason::kEos}) {
    ScriptedBackend lm("more ", FinishReason::kLength);
    lm.when_contains("more more ", "end", finish);
    const auto out = generate_blocks(small_params(), lm, [](std::size_t) { return "c"; }, "");
    EXPECT_EQ(out, "more more end");
    EXPECT_EQ(lm.call_count(), 3u);
  }
  ScriptedBackend once("done", FinishReason::kStop);
  generate_blocks(small_params(), once, [](std::size_t) { return "c"; }, "");
  EXPECT_EQ(once.call_count(), 1u);
}

TEST(GenerateBlocks, BlockOfOneIsPerTokenSampling) {
  ScriptedBackend lm("t", FinishReason::kLength);
  auto g = small_params();
  g.max_total_tokens = 7;
  g.block_tokens = 1;
  generate_blocks(g, lm, [](std::size_t) { return "c"; }, "");
  EXPECT_EQ(lm.call_count(), 7u);
}

TEST(RenderRefinePrompt, Case1UsesPromptAndOwnBatch) {
  const auto r = make_record(4, "MY PROMPT");
  const auto text = render_refine_prompt(r, small_params());
  EXPECT_NE(text.find("MY PROMPT"), std::string::npos);
  EXPECT_NE(text.find("Input: in4"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 22), "Improved instruction:\n");
}

TEST(RenderRefinePrompt, Case2AddsOwnGradient) {
  auto g = GenerationParams::for_mode(GenerationMode::kCase2Gradient);
  const auto r = make_record(1, "P1", "FEEDBACK ONE");
  const auto text = render_refine_prompt(r, g);
  EXPECT_NE(text.find("FEEDBACK ONE"), std::string::npos);
  EXPECT_NE(text.find("P1"), std::string::npos);
  EXPECT_THROW(render_refine_prompt(make_record(1, "P1"), g), Error);
}

TEST(TextualGradient, UsesAnalyzeTemplate) {
  ScriptedBackend lm("the instruction ignores negation");
  const auto r = make_record(2, "P2");
  auto g = GenerationParams::for_mode(GenerationMode::kCase2Gradient);
  const auto grad = compute_textual_gradient(r, *g.analyze_template, lm, g, "iter2");
  EXPECT_EQ(grad, "the instruction ignores negation");
  const auto req = lm.call_log().at(0);
  EXPECT_EQ(req.request_tag, "iter2/analyze");
  EXPECT_EQ(req.max_new_tokens, g.analyze_max_tokens);
  EXPECT_NE(req.prompt_text.find("Student Output: negative"), std::string::npos);

  PromptRecord empty = r;
  empty.batch_triples.clear();
  EXPECT_THROW(compute_textual_gradient(empty, *g.analyze_template, lm, g), EmptyBatchError);
}

TEST(ConcatMomentumPrompt, HeaderWindowAndOrder) {
  const auto h = make_history(5);
  const auto text = concat_momentum_prompt(h, 3, default_concat_template());
  EXPECT_NE(text.find("Here are the past iterations of this variable"), std::string::npos);
  EXPECT_NE(text.find("<PAST_ITERATIONS>\n[1] PROMPT_2\n[2] PROMPT_3\n[3] PROMPT_4\n"
                      "</PAST_ITERATIONS>"),
            std::string::npos);
  EXPECT_EQ(text.find("PROMPT_1"), std::string::npos);
  // Newest batch.
  EXPECT_NE(text.find("Input: in4"), std::string::npos);

  const auto short_h = make_history(2);
  const auto all = concat_momentum_prompt(short_h, 10, default_concat_template());
  EXPECT_NE(all.find("[1] PROMPT_0\n[2] PROMPT_1\n"), std::string::npos);
  EXPECT_THROW(concat_momentum_prompt(OptimizerHistory{}, 3, default_concat_template()),
               EmptyHistoryError);
}

TEST(MomentumGenerate, AlphaZeroConditionsOnNewestOnly) {
  const auto h = make_history(6);
  ScriptedBackend lm("x", FinishReason::kLength);
  auto g = small_params();
  g.alpha = 0.0;
  RandomStream rng(3);
  momentum_generate(h, g, rng, lm, "t");
  for (const auto& r : lm.call_log()) EXPECT_EQ(r.prompt_text, render_refine_prompt(h[5], g));
}

TEST(MomentumGenerate, SourcesFollowMixtureWeights) {
  const auto h = make_history(3);
  ScriptedBackend lm("x", FinishReason::kLength);
  auto g = small_params();
  g.alpha = 0.6;
  g.max_total_tokens = 3000;
  g.block_tokens = 1;
  RandomStream rng(17);
  momentum_generate(h, g, rng, lm, "");
  std::map<std::string, int> counts;
  for (const auto& r : lm.call_log()) ++counts[r.prompt_text];
  const auto w = momentum_weights(0.6, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    const double n = 3000;
    const double sd = std::sqrt(n * w[i] * (1 - w[i]));
    EXPECT_NEAR(counts[render_refine_prompt(h[i], g)], n * w[i], 4 * sd);
  }
}

TEST(MomentumGenerate, Case2PairsEachSourceWithItsGradient) {
  const auto h = make_history(4, true);
  ScriptedBackend lm("x", FinishReason::kLength);
  auto g = GenerationParams::for_mode(GenerationMode::kCase2Gradient);
  g.alpha = 1.0;
  g.max_total_tokens = 200;
  g.block_tokens = 1;
  RandomStream rng(5);
  momentum_generate(h, g, rng, lm, "");
  for (const auto& r : lm.call_log()) {
    int pairs = 0;
    for (int i = 0; i < 4; ++i) {
      const bool has_p = r.prompt_text.find("PROMPT_" + std::to_string(i)) != std::string::npos;
      const bool has_g = r.prompt_text.find("GRAD_" + std::to_string(i)) != std::string::npos;
      EXPECT_EQ(has_p, has_g);
      pairs += has_p;
    }
    EXPECT_EQ(pairs, 1);
  }
}

TEST(ArgmaxLowestIndex, TieBreak) {
  EXPECT_EQ(argmax_lowest_index({0.1, 0.5, 0.5, 0.2}), 1u);
  EXPECT_EQ(argmax_lowest_index({0.3}), 0u);
  EXPECT_EQ(argmax_lowest_index({0.2, 0.2, 0.2}), 0u);
  EXPECT_THROW(argmax_lowest_index({}), EmptySetError);
}

TEST(Update, SingleCandidateIsNotScored) {
  SequenceBackend lm;
  int calls = 0;
  task::FunctionScorer score([&](const std::string&) {
    ++calls;
    return 1.0;
  });
  const auto h = make_history(2);
  const auto u = update_mom(h, small_params(1), score, RandomStream(1), lm, 1);
  EXPECT_EQ(calls, 0);
  EXPECT_TRUE(u.candidate_scores.empty());
  EXPECT_EQ(u.next_prompt, "P1");
}

TEST(Update, PicksBestCandidateWithLowestIndexOnTies) {
  SequenceBackend lm;
  std::map<std::string, double> table{{"P1", 0.2}, {"P2", 0.7}, {"P3", 0.7}, {"P4", 0.1}};
  task::FunctionScorer score([&](const std::string& p) { return table.at(p); });
  const auto h = make_history(1);
  const auto u = update_vanilla(h.back(), small_params(4), score, RandomStream(1), lm, 0);
  EXPECT_EQ(u.candidates, (std::vector<std::string>{"P1", "P2", "P3", "P4"}));
  EXPECT_EQ(u.candidate_scores, (std::vector<double>{0.2, 0.7, 0.7, 0.1}));
  EXPECT_EQ(u.selected_index, 1u);
  EXPECT_EQ(u.next_prompt, "P2");
}

TEST(Update, ParallelCandidatesMatchSequential) {
  const auto h = make_history(4);
  auto g = small_params(6);
  g.alpha = 0.7;
  g.block_tokens = 1;
  g.max_total_tokens = 12;
  task::FunctionScorer score([](const std::string& p) { return static_cast<double>(p.size()); });
  // Output depends on which history record conditions each block.
  ScriptedBackend lm1("z", FinishReason::kLength);
  ScriptedBackend lm2("z", FinishReason::kLength);
  for (auto* lm : {&lm1, &lm2}) {
    for (int i = 0; i < 4; ++i) {
      lm->when_contains("PROMPT_" + std::to_string(i), std::to_string(i), FinishReason::kLength);
    }
  }
  const auto seq = update_mom(h, g, score, RandomStream(8), lm1, 3);
  g.parallel_candidates = true;
  const auto par = update_mom(h, g, score, RandomStream(8), lm2, 3);
  EXPECT_EQ(seq.candidates, par.candidates);
  EXPECT_EQ(seq.selected_index, par.selected_index);
  // Candidates draw from distinct streams.
  EXPECT_NE(seq.candidates[0], seq.candidates[1]);
}

TEST(Update, ConcatConditionsEveryBlockOnConcatenation) {
  ScriptedBackend lm("x", FinishReason::kLength);
  task::FunctionScorer score([](const std::string&) { return 0.0; });
  const auto h = make_history(4);
  auto g = GenerationParams::for_mode(GenerationMode::kConcatBaseline);
  g.candidates = 2;
  g.max_total_tokens = 20;
  const auto u = update_concat(h, g, score, RandomStream(2), lm, 3);
  const std::string expected = concat_momentum_prompt(h, 3, g.concat_template);
  ASSERT_EQ(lm.call_count(), 4u);
  for (const auto& r : lm.call_log()) EXPECT_EQ(r.prompt_text, expected);
  EXPECT_EQ(lm.call_log()[3].request_tag, "iter3/cand1/block1");
  EXPECT_EQ(u.candidates.size(), 2u);
}

// --- run loop -------------------------------------------------------------

RunConfig quick_config(int iterations, int k) {
  RunConfig c;
  c.total_iterations = iterations;
  c.batch_size = 4;
  c.generation.candidates = k;
  c.generation.max_total_tokens = 20;
  c.generation.block_tokens = 10;
  return c;
}

// Scores prompts from a fixed sequence in call order.
task::FunctionScorer scripted_scores(std::vector<double> seq) {
  auto state = std::make_shared<std::pair<std::vector<double>, std::size_t>>(std::move(seq), 0);
  return task::FunctionScorer([state](const std::string&) {
    auto& [values, i] = *state;
    const double v = values.at(std::min(i, values.size() - 1));
    ++i;
    return v;
  });
}

TEST(RunTsgd, EarlyStopTraceReturnsIterationOnePrompt) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend lm;
  auto scorer = scripted_scores({0.5, 0.6, 0.6, 0.6, 0.9, 0.9});
  const auto r = run_tsgd(quick_config(20, 1), task, lm, scorer);
  EXPECT_EQ(r.stop_reason, StopReason::kEarlyStopped);
  ASSERT_EQ(r.per_iteration.size(), 4u);
  EXPECT_EQ(r.best_iteration, 1u);
  EXPECT_EQ(r.best_prompt, "P1");
  EXPECT_DOUBLE_EQ(r.best_score, 0.6);
  EXPECT_EQ(r.per_iteration[3].selected_prompt, "P3");
  EXPECT_EQ(r.history.size(), 3u);
}

TEST(RunTsgd, StrictImprovementResetsPatience) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend lm;
  auto scorer = scripted_scores({0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.7});
  const auto r = run_tsgd(quick_config(20, 1), task, lm, scorer);
  ASSERT_EQ(r.per_iteration.size(), 7u);
  EXPECT_EQ(r.best_iteration, 4u);
  EXPECT_EQ(r.stop_reason, StopReason::kEarlyStopped);
}

TEST(RunTsgd, InitialPromptCanWin) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend lm;
  auto scorer = scripted_scores({0.9, 0.1, 0.2});
  const auto r = run_tsgd(quick_config(20, 1), task, lm, scorer);
  EXPECT_EQ(r.best_iteration, 0u);
  EXPECT_EQ(r.best_prompt, task.initial_prompt);
}

TEST(RunTsgd, RunsToMaxIterationsWhenImproving) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend lm;
  auto scorer = scripted_scores({0.1, 0.2, 0.3, 0.4});
  const auto r = run_tsgd(quick_config(3, 1), task, lm, scorer);
  EXPECT_EQ(r.stop_reason, StopReason::kMaxIterations);
  EXPECT_EQ(r.per_iteration.size(), 4u);
  EXPECT_EQ(r.best_iteration, 3u);
}

TEST(RunTsgd, ZeroIterationsScoresInitialPromptOnly) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend lm;
  auto scorer = scripted_scores({0.4});
  const auto r = run_tsgd(quick_config(0, 3), task, lm, scorer);
  EXPECT_EQ(r.per_iteration.size(), 1u);
  EXPECT_EQ(r.best_prompt, task.initial_prompt);
  EXPECT_EQ(r.total_lm_calls, 0);
}

TEST(RunTsgd, ReusesCandidateScoreWhenSeveralCandidates) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend lm;
  int calls = 0;
  task::FunctionScorer scorer([&](const std::string& p) {
    ++calls;
    return p == task.initial_prompt ? 0.0 : 1.0 / static_cast<double>(p.size());
  });
  auto c = quick_config(2, 3);
  c.patience = 5;
  const auto r = run_tsgd(c, task, lm, scorer);
  // p0 once, then k per iteration and no re-scoring of the winner.
  EXPECT_EQ(calls, 1 + 2 * 3);
  ASSERT_EQ(r.per_iteration.size(), 3u);
  EXPECT_EQ(r.per_iteration[1].candidate_scores.size(), 3u);
  EXPECT_EQ(r.per_iteration[1].selected_candidate, 0u);
  EXPECT_FALSE(r.per_iteration[0].selected_candidate);
}

TEST(RunTsgd, ForwardPassesUseBatchAndTemperatureZero) {
  const auto task = testing::toy_task(20, 5);
  ScriptedBackend lm("positive");
  lm.when_contains("Improved instruction:", "new prompt", FinishReason::kStop);
  auto scorer = scripted_scores({0.1, 0.2});
  auto c = quick_config(1, 1);
  run_tsgd(c, task, lm, scorer);
  int forward = 0;
  for (const auto& r : lm.call_log()) {
    if (r.request_tag.find("/forward") != std::string::npos) {
      ++forward;
      EXPECT_EQ(r.temperature, 0.0);
      EXPECT_EQ(r.prompt_text.rfind(task.initial_prompt + "\n", 0), 0u);
      EXPECT_EQ(r.prompt_text.substr(r.prompt_text.size() - 8), "\nAnswer:");
    }
  }
  EXPECT_EQ(forward, c.batch_size);
}

TEST(RunTsgd, DeterministicAcrossRepeats) {
  const auto task = testing::toy_task(30, 10);
  auto run_once = [&] {
    auto lm = testing::toy_backend();
    task::ScoreOptions so;
    so.label_set = task.label_set;
    task::AccuracyScorer scorer(task.holdout, lm, so);
    auto c = quick_config(4, 3);
    c.seed = 1234;
    return std::make_pair(run_tsgd(c, task, lm, scorer), lm.call_log());
  };
  const auto a = run_once();
  const auto b = run_once();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(nlohmann::json(a.first).dump(), nlohmann::json(b.first).dump());
  EXPECT_EQ(a.second, b.second);
  EXPECT_DOUBLE_EQ(a.first.best_score, 1.0);
}

TEST(RunTsgd, SeedChangesBatches) {
  const auto task = testing::toy_task(30, 10);
  auto batches = [&](std::uint64_t seed) {
    SequenceBackend lm;
    auto scorer = scripted_scores({0.1, 0.2, 0.3});
    auto c = quick_config(2, 1);
    c.seed = seed;
    return run_tsgd(c, task, lm, scorer).history.at(0).batch_triples;
  };
  EXPECT_NE(batches(1), batches(2));
  EXPECT_EQ(batches(1), batches(1));
}

TEST(RunTsgd, TrainSizeRestrictsPool) {
  const auto task = testing::toy_task(30, 5);
  SequenceBackend lm;
  auto scorer = scripted_scores({0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  auto c = quick_config(5, 1);
  c.train_size = 4;
  c.batch_size = 4;
  const auto r = run_tsgd(c, task, lm, scorer);
  std::set<std::string> inputs;
  for (const auto& rec : r.history)
    for (const auto& t : rec.batch_triples) inputs.insert(t.input);
  EXPECT_EQ(inputs.size(), 4u);

  c.train_size = 31;
  auto scorer2 = scripted_scores({0.1});
  EXPECT_THROW(run_tsgd(c, task, lm, scorer2), RunError);
}

TEST(RunTsgd, Case2ComputesGradientPerRecord) {
  const auto task = testing::toy_task(20, 5);
  ScriptedBackend lm("positive");
  lm.when_contains("Analysis:", "GRADIENT TEXT", FinishReason::kStop);
  lm.when_contains("Improved instruction:", "next", FinishReason::kStop);
  auto scorer = scripted_scores({0.1, 0.2, 0.3});
  auto c = quick_config(2, 1);
  c.generation = GenerationParams::for_mode(GenerationMode::kCase2Gradient);
  c.generation.candidates = 1;
  const auto r = run_tsgd(c, task, lm, scorer);
  ASSERT_EQ(r.history.size(), 2u);
  for (const auto& rec : r.history) EXPECT_EQ(rec.gradient_text, "GRADIENT TEXT");
  bool refine_saw_gradient = false;
  for (const auto& q : lm.call_log()) {
    if (q.prompt_text.find("Improved instruction:") != std::string::npos) {
      refine_saw_gradient |= q.prompt_text.find("GRADIENT TEXT") != std::string::npos;
    }
  }
  EXPECT_TRUE(refine_saw_gradient);
}

TEST(RunTsgd, FailureCarriesPartialResultAndCause) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend inner;
  lm::MeteredBackend lm(inner, 6);
  auto scorer = scripted_scores({0.1, 0.2, 0.3});
  try {
    run_tsgd(quick_config(5, 1), task, lm, scorer);
    FAIL() << "expected RunError";
  } catch (const RunError& e) {
    // Iteration 0 takes 4 forward calls and 1 generation call; the budget
    // runs out during iteration 1's forward passes.
    EXPECT_EQ(e.partial().per_iteration.size(), 2u);
    try {
      std::rethrow_if_nested(e);
      FAIL() << "expected nested cause";
    } catch (const BudgetExceededError&) {
    }
  }
}

TEST(RunTsgd, CallbackSeesEveryIteration) {
  const auto task = testing::toy_task(20, 5);
  SequenceBackend lm;
  auto scorer = scripted_scores({0.1, 0.2, 0.3, 0.4});
  std::vector<std::size_t> seen;
  run_tsgd(quick_config(3, 1), task, lm, scorer,
           [&](const IterationLog& log) { seen.push_back(log.iteration); });
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(RunTsgd, CumulativeAccountingIsMonotone) {
  const auto task = testing::toy_task(20, 6);
  auto lm = testing::toy_backend();
  task::ScoreOptions so;
  so.label_set = task.label_set;
  task::AccuracyScorer scorer(task.holdout, lm, so);
  auto c = quick_config(3, 2);
  c.patience = 5;
  const auto r = run_tsgd(c, task, lm, scorer);
  for (std::size_t i = 1; i < r.per_iteration.size(); ++i) {
    EXPECT_GT(r.per_iteration[i].lm_calls_cumulative, r.per_iteration[i - 1].lm_calls_cumulative);
    EXPECT_GT(r.per_iteration[i].tokens_cumulative, r.per_iteration[i - 1].tokens_cumulative);
  }
  EXPECT_EQ(static_cast<std::size_t>(r.total_lm_calls), lm.call_count());
}

TEST(RunTsgd, AlphaZeroMatchesVanillaOnRandomScenarios) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto s = testing::random_scenario(seed);
    const auto mom = testing::run_scenario(s, true);
    const auto van = testing::run_scenario(s, false);
    EXPECT_EQ(mom.result, van.result) << "scenario " << seed;
    EXPECT_EQ(nlohmann::json(mom.result).dump(), nlohmann::json(van.result).dump());
    EXPECT_EQ(mom.call_log, van.call_log) << "scenario " << seed;
  }
}

TEST(RunTsgd, PositiveAlphaDrawsOnOlderPrompts) {
  // With several records and alpha = 1, some block must condition on a
  // record other than the newest one.
  auto s = testing::random_scenario(7);
  s.config.total_iterations = 4;
  s.config.patience = 10;
  s.config.generation.alpha = 1.0;
  s.config.generation.block_tokens = 1;
  s.config.generation.max_total_tokens = 30;
  s.backend_spec["rules"] = nlohmann::json::array();
  s.backend_spec["default_finish_reason"] = "length";
  const auto run = testing::run_scenario(s, true);
  ASSERT_GE(run.result.history.size(), 2u);
  bool used_older = false;
  for (const auto& r : run.call_log) {
    if (r.request_tag.rfind("iter1/cand", 0) == 0 &&
        r.prompt_text.find("Current instruction:\n" + run.result.history[0].prompt_text +
                           "\n") != std::string::npos) {
      used_older = true;
    }
  }
  EXPECT_TRUE(used_older);
}

TEST(RunConfig, PresetsAndValidation) {
  RunConfig c;
  c.preset = HypothesisPreset::kH1;
  c.apply_preset();
  EXPECT_DOUBLE_EQ(c.generation.temperature, 1.1);
  EXPECT_EQ(c.patience, 5);
  c.preset = HypothesisPreset::kH0;
  c.apply_preset();
  EXPECT_DOUBLE_EQ(c.generation.temperature, 0.7);
  EXPECT_EQ(c.patience, 2);

  RunConfig d;
  EXPECT_EQ(d.total_iterations, 20);
  EXPECT_EQ(d.batch_size, 20);
  EXPECT_EQ(d.generation.candidates, 20);
  EXPECT_EQ(d.generation.max_total_tokens, 100);
  EXPECT_EQ(d.generation.block_tokens, 10);
  d.batch_size = 0;
  EXPECT_THROW(d.validate(), DomainError);
  GenerationParams g;
  g.alpha = 1.5;
  EXPECT_THROW(g.validate(), DomainError);
  g = GenerationParams{};
  g.block_tokens = 200;
  EXPECT_THROW(g.validate(), DomainError);
}

}  // namespace
}  // namespace tsgdm::optimizer
