// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsgdm/experiment/config.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

#include "tsgdm/common/error.hpp"
#include "tsgdm/task/presets.hpp"

namespace tsgdm::experiment {
namespace {

using nlohmann::json;

// Typed access to one JSON object, reporting errors by dotted path.
class Section {
 public:
  Section(const json& obj, std::string path, bool strict,
          std::initializer_list<const char*> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected object");
    if (strict) {
      const std::set<std::string> names(allowed.begin(), allowed.end());
      for (const auto& [key, _] : obj_.items()) {
        if (!names.count(key)) throw UnknownFieldError(field(key));
      }
    }
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }
  const json& raw(const char* key) const { return obj_.at(key); }

  std::optional<std::int64_t> integer(const char* key, std::int64_t min) const {
    if (!has(key)) return std::nullopt;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "expected integer");
    const auto x = v.get<std::int64_t>();
    if (x < min) throw ConfigError(field(key), "must be >= " + std::to_string(min));
    return x;
  }

  std::optional<double> number(const char* key, double lo, double hi) const {
    if (!has(key)) return std::nullopt;
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) {
      throw ConfigError(field(key), "out of range [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
    return x;
  }

  std::optional<bool> boolean(const char* key) const {
    if (!has(key)) return std::nullopt;
    if (!obj_.at(key).is_boolean()) throw ConfigError(field(key), "expected boolean");
    return obj_.at(key).get<bool>();
  }

  std::optional<std::string> string(const char* key) const {
    if (!has(key)) return std::nullopt;
    if (!obj_.at(key).is_string()) throw ConfigError(field(key), "expected string");
    return obj_.at(key).get<std::string>();
  }

  std::optional<std::vector<std::string>> strings(const char* key) const {
    if (!has(key)) return std::nullopt;
    const json& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw ConfigError(field(key), "expected array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

 private:
  static std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::string s = std::to_string(x);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  const json& obj_;
  std::string path_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Fn>
auto rethrow_as_config(const std::string& field, Fn fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

SplitSource parse_split(const Section& s, const char* key) {
  const json& v = s.raw(key);
  if (v.is_string()) return std::filesystem::path(v.get<std::string>());
  if (!v.is_array()) throw ConfigError(s.field(key), "expected path or array of examples");
  std::vector<task::LabeledExample> out;
  for (const auto& e : v) {
    if (!e.is_object() || !e.contains("text") || !e.contains("label") ||
        !e.at("text").is_string() || !e.at("label").is_string()) {
      throw ConfigError(s.field(key), "inline examples need string 'text' and 'label'");
    }
    out.push_back({e.at("text").get<std::string>(), e.at("label").get<std::string>()});
  }
  return out;
}

TaskSource parse_task(const json& j, bool strict) {
  const Section s(j, "task", strict,
                  {"preset", "name", "kind", "label_set", "initial_prompt", "train", "holdout",
                   "test"});
  TaskSource t;
  if (auto preset_name = s.string("preset")) {
    const auto preset = task::find_task_preset(*preset_name);
    if (!preset) throw ConfigError("task.preset", "unknown task preset '" + *preset_name + "'");
    t.name = preset->name;
    t.kind = preset->kind;
    t.label_set = preset->label_set;
    t.initial_prompt = preset->initial_prompt;
  }
  if (auto v = s.string("name")) t.name = *v;
  if (auto v = s.string("kind")) {
    t.kind = rethrow_as_config("task.kind", [&] { return task::score_kind_from_string(*v); });
  }
  if (auto v = s.strings("label_set")) t.label_set = *v;
  if (auto v = s.string("initial_prompt")) t.initial_prompt = *v;
  if (t.name.empty()) throw ConfigError("task.name", "task needs a preset or a name");
  if (t.initial_prompt.empty()) throw ConfigError("task.initial_prompt", "required");
  if (t.kind == task::ScoreKind::kClassificationAccuracy && t.label_set.empty()) {
    throw ConfigError("task.label_set", "required for classification tasks");
  }
  if (s.has("train")) t.train = parse_split(s, "train");
  if (s.has("holdout")) t.holdout = parse_split(s, "holdout");
  if (s.has("test")) t.test = parse_split(s, "test");
  return t;
}

BackendConfig parse_backend(const json& j, bool strict) {
  const Section s(j, "backend", strict,
                  {"kind", "scripted", "remote", "cache", "max_gateway_calls", "score_workers"});
  BackendConfig b;
  const std::string kind = s.string("kind").value_or("scripted");
  if (kind == "scripted") {
    b.kind = BackendKind::kScripted;
    if (s.has("scripted")) {
      const json& sj = s.raw("scripted");
      Section(sj, "backend.scripted", strict,
              {"default_response", "default_finish_reason", "rules"});
      b.scripted = sj;
    }
  } else if (kind == "remote") {
    b.kind = BackendKind::kRemote;
    if (!s.has("remote")) throw ConfigError("backend.remote", "required for remote backend");
    const json& rj = s.raw("remote");
    const Section r(rj, "backend.remote", strict,
                    {"base_url", "model", "api_key_env", "timeout_seconds", "api",
                     "max_attempts", "initial_backoff_seconds", "max_backoff_seconds"});
    if (!r.string("base_url")) throw ConfigError("backend.remote.base_url", "required");
    if (!r.string("model")) throw ConfigError("backend.remote.model", "required");
    r.integer("max_attempts", 1);
    r.number("timeout_seconds", 1e-3, kInf);
    b.remote = lm::remote_config_from_json(rj);
  } else {
    throw ConfigError("backend.kind", "expected scripted or remote");
  }
  if (s.has("cache")) {
    const Section c(s.raw("cache"), "backend.cache", strict, {"mode", "dir"});
    if (auto mode = c.string("mode")) {
      b.cache_mode = rethrow_as_config("backend.cache.mode",
                                       [&] { return lm::cache_mode_from_string(*mode); });
      b.cache_dir = c.string("dir").value_or("cache");
    }
  }
  if (auto v = s.integer("max_gateway_calls", 1)) b.max_gateway_calls = *v;
  if (auto v = s.integer("score_workers", 1)) b.score_workers = static_cast<std::size_t>(*v);
  return b;
}

void parse_generation(const json& j, bool strict, optimizer::GenerationParams& g) {
  const Section s(j, "run.generation", strict,
                  {"alpha", "max_total_tokens", "block_tokens", "temperature", "candidates",
                   "mode", "refine_template", "analyze_template", "analyze_max_tokens",
                   "concat_template", "concat_window", "stop_sequences", "parallel_candidates"});
  if (auto mode = s.string("mode")) {
    g = optimizer::GenerationParams::for_mode(rethrow_as_config(
        "run.generation.mode", [&] { return optimizer::generation_mode_from_string(*mode); }));
  }
  if (auto v = s.number("alpha", 0.0, 1.0)) g.alpha = *v;
  if (auto v = s.integer("max_total_tokens", 1)) g.max_total_tokens = static_cast<int>(*v);
  if (auto v = s.integer("block_tokens", 1)) g.block_tokens = static_cast<int>(*v);
  if (auto v = s.number("temperature", 0.0, kInf)) g.temperature = *v;
  if (auto v = s.integer("candidates", 1)) g.candidates = static_cast<int>(*v);
  if (auto v = s.string("refine_template")) g.refine_template = TemplateText(*v);
  if (auto v = s.string("analyze_template")) g.analyze_template = TemplateText(*v);
  if (auto v = s.integer("analyze_max_tokens", 1)) g.analyze_max_tokens = static_cast<int>(*v);
  if (auto v = s.string("concat_template")) g.concat_template = TemplateText(*v);
  if (auto v = s.integer("concat_window", 1)) g.concat_window = static_cast<int>(*v);
  if (auto v = s.strings("stop_sequences")) g.stop_sequences = *v;
  if (auto v = s.boolean("parallel_candidates")) g.parallel_candidates = *v;
  if (g.block_tokens > g.max_total_tokens) {
    throw ConfigError("run.generation.block_tokens", "must not exceed max_total_tokens");
  }
  rethrow_as_config("run.generation", [&] {
    g.validate();
    return 0;
  });
}

optimizer::RunConfig parse_run(const json& j, bool strict) {
  const Section s(j, "run", strict,
                  {"total_iterations", "batch_size", "train_size", "patience", "preset",
                   "use_momentum", "batch_with_replacement", "forward_max_tokens",
                   "generation"});
  optimizer::RunConfig r;
  if (auto v = s.string("preset")) {
    r.preset = rethrow_as_config("run.preset",
                                 [&] { return optimizer::hypothesis_preset_from_string(*v); });
  }
  if (auto v = s.integer("total_iterations", 0)) r.total_iterations = static_cast<int>(*v);
  if (auto v = s.integer("batch_size", 1)) r.batch_size = static_cast<int>(*v);
  if (auto v = s.integer("train_size", 1)) r.train_size = static_cast<int>(*v);
  const auto patience = s.integer("patience", 1);
  if (auto v = s.boolean("use_momentum")) r.use_momentum = *v;
  if (auto v = s.boolean("batch_with_replacement")) r.batch_with_replacement = *v;
  if (auto v = s.integer("forward_max_tokens", 1)) r.forward_max_tokens = static_cast<int>(*v);
  if (s.has("generation")) parse_generation(s.raw("generation"), strict, r.generation);

  const bool explicit_temperature =
      s.has("generation") && s.raw("generation").contains("temperature");
  const double requested_temperature = r.generation.temperature;
  if (patience) r.patience = static_cast<int>(*patience);
  r.apply_preset();
  if (r.preset != optimizer::HypothesisPreset::kCustom) {
    const std::string name(optimizer::to_string(r.preset));
    if (explicit_temperature && requested_temperature != r.generation.temperature) {
      throw ConfigError("run.generation.temperature",
                        "conflicts with preset " + name + "; use preset \"custom\"");
    }
    if (patience && *patience != r.patience) {
      throw ConfigError("run.patience", "conflicts with preset " + name + "; use preset \"custom\"");
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBatchSize:
      return "batch_size";
    case SweepAxis::kTrainSize:
      return "train_size";
    case SweepAxis::kAlpha:
      return "alpha";
    case SweepAxis::kTemperature:
      return "temperature";
  }
  return "batch_size";
}

ExperimentConfig parse_config(std::string_view text, bool strict) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc, strict);
}

ExperimentConfig parse_config(const nlohmann::json& doc, bool strict) {
  const Section root(doc, "", strict,
                     {"task", "backend", "run", "trials", "seed_base", "sweep", "output_dir"});
  ExperimentConfig c;
  if (!root.has("task")) throw ConfigError("task", "required");
  c.task = parse_task(root.raw("task"), strict);
  c.backend = root.has("backend") ? parse_backend(root.raw("backend"), strict)
                                  : parse_backend(json::object(), strict);
  c.run = root.has("run") ? parse_run(root.raw("run"), strict) : parse_run(json::object(), strict);
  if (auto v = root.integer("trials", 1)) c.trials = static_cast<int>(*v);
  if (auto v = root.integer("seed_base", 0)) c.seed_base = static_cast<std::uint64_t>(*v);
  if (auto v = root.string("output_dir")) c.output_dir = *v;

  if (root.has("sweep")) {
    const Section s(root.raw("sweep"), "sweep", strict, {"axis", "values"});
    const std::string axis = s.string("axis").value_or("");
    Sweep sweep;
    if (axis == "batch_size") {
      sweep.axis = SweepAxis::kBatchSize;
    } else if (axis == "train_size") {
      sweep.axis = SweepAxis::kTrainSize;
    } else if (axis == "alpha") {
      sweep.axis = SweepAxis::kAlpha;
    } else if (axis == "temperature") {
      sweep.axis = SweepAxis::kTemperature;
    } else {
      throw ConfigError("sweep.axis", "expected batch_size, train_size, alpha or temperature");
    }
    if (!s.has("values") || !s.raw("values").is_array() || s.raw("values").empty()) {
      throw ConfigError("sweep.values", "must be a nonempty array");
    }
    for (const auto& v : s.raw("values")) {
      if (!v.is_number()) throw ConfigError("sweep.values", "expected numbers");
      sweep.values.push_back(v.get<double>());
    }
    if (sweep.axis == SweepAxis::kTemperature &&
        c.run.preset != optimizer::HypothesisPreset::kCustom) {
      throw ConfigError("sweep.axis", "temperature sweeps need run.preset \"custom\"");
    }
    for (double v : sweep.values) {
      // Surface bad values now rather than mid-sweep.
      with_axis_value(c, sweep.axis, v);
    }
    c.sweep = std::move(sweep);
  }
  return c;
}

ExperimentConfig with_axis_value(const ExperimentConfig& config, SweepAxis axis, double value) {
  ExperimentConfig out = config;
  const std::string field = "sweep.values";
  auto as_count = [&](double v) {
    if (!(v >= 1.0) || std::floor(v) != v) {
      throw ConfigError(field, "value for " + std::string(to_string(axis)) +
                                   " must be a positive integer");
    }
    return static_cast<int>(v);
  };
  switch (axis) {
    case SweepAxis::kBatchSize:
      out.run.batch_size = as_count(value);
      break;
    case SweepAxis::kTrainSize:
      out.run.train_size = as_count(value);
      break;
    case SweepAxis::kAlpha:
      if (!(value >= 0.0 && value <= 1.0)) throw ConfigError(field, "alpha must lie in [0, 1]");
      out.run.generation.alpha = value;
      break;
    case SweepAxis::kTemperature:
      if (!(value >= 0.0)) throw ConfigError(field, "temperature must be >= 0");
      out.run.generation.temperature = value;
      break;
  }
  return out;
}

task::TaskBinding load_task(const TaskSource& source) {
  auto resolve = [&](const SplitSource& split,
                     const char* which) -> std::vector<task::LabeledExample> {
    if (const auto* path = std::get_if<std::filesystem::path>(&split)) {
      if (path->empty()) throw ConfigError(std::string("task.") + which, "no dataset given");
      return task::load_dataset(*path, source.label_set);
    }
    return std::get<std::vector<task::LabeledExample>>(split);
  };
  task::TaskBinding t;
  t.name = source.name;
  t.kind = source.kind;
  t.label_set = source.label_set;
  t.initial_prompt = source.initial_prompt;
  t.train = resolve(source.train, "train");
  t.holdout = resolve(source.holdout, "holdout");
  if (source.test) t.test = resolve(*source.test, "test");
  t.validate();
  if (t.train.empty()) throw Error("task '" + t.name + "': train split is empty");
  if (t.holdout.empty()) throw Error("task '" + t.name + "': holdout split is empty");
  return t;
}

}  // namespace tsgdm::experiment
