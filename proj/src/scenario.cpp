/* Copyright 2026 The costtune Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "costtune/scenario.hpp"

#include <chrono>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "costtune/error.hpp"
#include "costtune/model_store.hpp"

namespace costtune {
namespace {

// Walks a JSON object while tracking the dotted field path for errors.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad("", "expected an object");
  }

  [[noreturn]] void bad(const std::string& field, const std::string& what) const {
    fail(ErrorCode::kValidation, at(field) + ": " + what);
  }

  std::string at(const std::string& field) const {
    if (field.empty()) return path_.empty() ? "scenario" : path_;
    return path_.empty() ? field : path_ + "." + field;
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) bad(it.key(), "unknown field");
    }
  }

  bool has(const char* name) const { return j_.contains(name); }

  Reader child(const char* name) const {
    if (!has(name)) bad(name, "missing");
    return Reader(j_.at(name), at(name));
  }

  double number(const char* name, double fallback) const {
    if (!has(name)) return fallback;
    const Json& v = j_.at(name);
    if (!v.is_number()) bad(name, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(name, "expected a finite number");
    return d;
  }

  double required_number(const char* name) const {
    if (!has(name)) bad(name, "missing");
    return number(name, 0.0);
  }

  std::int64_t integer(const char* name, std::int64_t fallback) const {
    if (!has(name)) return fallback;
    const Json& v = j_.at(name);
    if (!v.is_number_integer()) bad(name, "expected an integer");
    return v.get<std::int64_t>();
  }

  int small(const char* name, int fallback) const {
    const std::int64_t v = integer(name, fallback);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      bad(name, "out of range");
    }
    return static_cast<int>(v);
  }

  std::string string(const char* name, const std::string& fallback) const {
    if (!has(name)) return fallback;
    const Json& v = j_.at(name);
    if (!v.is_string()) bad(name, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* name, bool fallback) const {
    if (!has(name)) return fallback;
    const Json& v = j_.at(name);
    if (!v.is_boolean()) bad(name, "expected true or false");
    return v.get<bool>();
  }

  const Json& raw(const char* name) const { return j_.at(name); }

 private:
  const Json& j_;
  std::string path_;
};

// Re-raises a domain validation error under a field path.
template <typename F>
void checked(const Reader& r, const std::string& field, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    r.bad(field, e.what());
  }
}

void read_workload(const Reader& r, Scenario& s, std::optional<std::string>& preset) {
  r.allow({"preset", "name", "dataset_size", "noise", "epochs", "parallel",
           "ramp_iters", "jitter", "gradient_dim"});
  SimWorkload& w = s.workload;
  if (r.has("preset")) {
    preset = r.string("preset", "");
    checked(r, "preset", [&] { w = preset_workload(*preset); });
  } else {
    for (const char* f : {"noise", "epochs", "parallel"}) {
      if (!r.has(f)) r.bad(f, "missing (required without a preset)");
    }
  }
  w.name = r.string("name", w.name);
  w.dataset_size = r.integer("dataset_size", w.dataset_size);
  if (r.has("noise")) {
    const Reader n = r.child("noise");
    n.allow({"a_n", "c_n"});
    w.noise = {n.number("a_n", w.noise.slope), n.number("c_n", w.noise.intercept)};
  }
  if (r.has("epochs")) {
    const Reader e = r.child("epochs");
    e.allow({"e_star", "theta"});
    w.epochs = {e.number("e_star", w.epochs.base_epochs),
                e.number("theta", w.epochs.slope)};
  }
  if (r.has("parallel")) {
    const Reader p = r.child("parallel");
    p.allow({"c0", "c_b", "c_K"});
    w.parallel = {p.number("c0", w.parallel.base_s),
                  p.number("c_b", w.parallel.per_sample_s),
                  p.number("c_K", w.parallel.per_worker_s)};
  }
  w.ramp_iters = r.number("ramp_iters", w.ramp_iters);
  w.jitter = r.number("jitter", w.jitter);
  w.gradient_dim = r.small("gradient_dim", w.gradient_dim);
  checked(r, "", [&] { validate(w); });
}

void read_cluster(const Reader& r, Scenario& s) {
  r.allow({"vcpus", "memory_gb", "pricing", "restore_overhead_s",
           "restore_overrides", "per_sample_gb", "fixed_overhead_gb"});
  SimCluster& c = s.cluster;
  c.shape.vcpus = r.small("vcpus", c.shape.vcpus);
  c.shape.memory_gb = r.number("memory_gb", c.shape.memory_gb);
  checked(r, "", [&] { validate(c.shape); });
  if (r.has("pricing")) {
    const Reader p = r.child("pricing");
    p.allow({"mode", "hourly_usd", "per_vcpu_usd", "per_gb_usd"});
    const std::string mode = p.string("mode", "flat");
    if (mode == "flat") {
      c.pricing = PricingModel::flat(p.number("hourly_usd", c.pricing.flat_hourly_usd));
    } else if (mode == "per_resource") {
      c.pricing = PricingModel::per_resource(p.required_number("per_vcpu_usd"),
                                             p.required_number("per_gb_usd"));
    } else {
      p.bad("mode", "expected \"flat\" or \"per_resource\"");
    }
    checked(p, "", [&] { validate(c.pricing); });
  }
  c.restore_overhead_s = r.number("restore_overhead_s", c.restore_overhead_s);
  if (r.has("restore_overrides")) {
    const Json& list = r.raw("restore_overrides");
    if (!list.is_array()) r.bad("restore_overrides", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Reader o(list[i], r.at("restore_overrides") + "[" + std::to_string(i) + "]");
      o.allow({"K", "B", "seconds"});
      c.restore_overrides[{o.small("K", 0), o.small("B", 0)}] =
          o.required_number("seconds");
    }
  }
  if (r.has("per_sample_gb")) c.per_sample_gb = r.number("per_sample_gb", 0.0);
  c.fixed_overhead_gb = r.number("fixed_overhead_gb", c.fixed_overhead_gb);
  checked(r, "", [&] { validate(c); });
}

void read_bounds(const Reader& r, SearchBounds& b) {
  r.allow({"workers_min", "workers_max", "workers_step", "batch_min", "batch_max",
           "batch_candidates"});
  b.workers_min = r.small("workers_min", b.workers_min);
  b.workers_max = r.small("workers_max", b.workers_max);
  b.workers_step = r.small("workers_step", b.workers_step);
  b.batch_min = r.small("batch_min", b.batch_min);
  b.batch_max = r.small("batch_max", b.batch_max);
  if (r.has("batch_candidates")) {
    const Json& list = r.raw("batch_candidates");
    if (!list.is_array()) r.bad("batch_candidates", "expected an array");
    b.batch_candidates.clear();
    for (const auto& v : list) {
      if (!v.is_number_integer()) r.bad("batch_candidates", "expected integers");
      b.batch_candidates.push_back(v.get<int>());
    }
  }
  checked(r, "", [&] { validate(b); });
}

void read_search(const Reader& r, Scenario& s) {
  r.allow({"mode", "profile_iters", "sampling", "ewma", "max_stabilization_iters",
           "store", "fingerprint", "allow_universal", "save_model"});
  const std::string mode = r.string("mode", "partial");
  if (mode == "full") {
    s.mode = ScenarioMode::kFull;
  } else if (mode == "partial") {
    s.mode = ScenarioMode::kPartial;
  } else if (mode == "scavenger") {
    s.mode = ScenarioMode::kScavenger;
  } else if (mode == "none") {
    s.mode = ScenarioMode::kNone;
  } else {
    r.bad("mode", "expected one of full, partial, scavenger, none");
  }
  SearchParams& p = s.params;
  p.profile_iters = r.small("profile_iters", p.profile_iters);
  p.max_stabilization_iters =
      r.integer("max_stabilization_iters", p.max_stabilization_iters);
  if (r.has("sampling")) {
    const Reader sm = r.child("sampling");
    sm.allow({"kind", "seed", "bspace", "kspace"});
    const std::string kind = sm.string("kind", "grid");
    if (kind == "grid") {
      p.sampling.kind = Sampling::Kind::kGrid;
    } else if (kind == "random") {
      p.sampling.kind = Sampling::Kind::kRandom;
      if (!sm.has("seed")) sm.bad("seed", "random sampling needs a seed");
      const std::int64_t seed = sm.integer("seed", 0);
      if (seed < 0) sm.bad("seed", "must be >= 0");
      p.sampling.seed = static_cast<std::uint64_t>(seed);
      p.sampling.bspace = sm.small("bspace", 0);
      p.sampling.kspace = sm.small("kspace", 0);
    } else {
      sm.bad("kind", "expected \"grid\" or \"random\"");
    }
  }
  if (r.has("ewma")) {
    const Reader e = r.child("ewma");
    e.allow({"alpha", "warmup_iters", "stability_window", "stability_rel_tol"});
    p.ewma.alpha = e.number("alpha", p.ewma.alpha);
    p.ewma.warmup_iters = e.small("warmup_iters", p.ewma.warmup_iters);
    p.ewma.stability_window = e.small("stability_window", p.ewma.stability_window);
    p.ewma.stability_rel_tol = e.number("stability_rel_tol", p.ewma.stability_rel_tol);
  }
  checked(r, "", [&] { validate(p); });
  if (r.has("store")) s.store_dir = r.string("store", "");
  s.fingerprint = r.string("fingerprint", s.workload.name);
  s.allow_universal = r.boolean("allow_universal", false);
  s.save_model = r.boolean("save_model", false);
  if (s.mode == ScenarioMode::kNone && !s.store_dir) {
    r.bad("store", "mode \"none\" needs a model store directory");
  }
  if (s.save_model && !s.store_dir) r.bad("store", "save_model needs a store");
  if (s.fingerprint.empty()) r.bad("fingerprint", "must not be empty");
}

void read_objective(const Reader& r, Scenario& s) {
  r.allow({"kind", "deadline_s", "budget_usd"});
  ObjectiveKind kind = ObjectiveKind::kKneePoint;
  checked(r, "kind", [&] {
    kind = objective_kind_from_string(r.string("kind", "knee"));
  });
  if (r.has("deadline_s")) s.constraints.deadline_s = r.number("deadline_s", 0.0);
  if (r.has("budget_usd")) s.constraints.budget_usd = r.number("budget_usd", 0.0);
  switch (kind) {
    case ObjectiveKind::kDeadline:
      s.objective = Objective::deadline(r.required_number("deadline_s"));
      break;
    case ObjectiveKind::kBudget:
      s.objective = Objective::budget(r.required_number("budget_usd"));
      break;
    case ObjectiveKind::kKneePoint:
      s.objective = Objective::knee_point();
      break;
    case ObjectiveKind::kMinCostTime:
      s.objective = Objective::min_cost_time();
      break;
  }
  checked(r, "", [&] { validate(s.objective); });
  if (s.constraints.deadline_s && !(*s.constraints.deadline_s > 0.0)) {
    r.bad("deadline_s", "must be positive");
  }
  if (s.constraints.budget_usd && !(*s.constraints.budget_usd > 0.0)) {
    r.bad("budget_usd", "must be positive");
  }
}

Json config_json(const JobConfig& c) {
  return {{"K", c.workers}, {"B", c.global_batch}};
}

Json point_json(const TradeoffPoint& p) {
  return {{"K", p.config.workers},
          {"B", p.config.global_batch},
          {"time_s", p.time_s},
          {"cost_usd", p.cost_usd}};
}

Json exploration_json(const Exploration& e) {
  return {{"K", e.config.workers},
          {"B", e.config.global_batch},
          {"kind", std::string(to_string(e.kind))},
          {"start_iteration", e.start_iteration},
          {"iterations", e.iterations},
          {"restore_s", e.restore_s},
          {"mean_iteration_time_s", e.mean_iteration_time_s},
          {"normalized_noise", e.normalized_noise},
          {"stabilized", e.stabilized},
          {"time_s", e.time_s()},
          {"cost_usd", e.cost_usd}};
}

Json model_json(const PerfModel& m) {
  return {{"provenance", std::string(to_string(m.provenance))},
          {"dataset_size", m.dataset_size},
          {"stat",
           {{"a_n", m.stat.noise_slope},
            {"c_n", m.stat.noise_intercept},
            {"e_star", m.stat.epochs_base},
            {"theta", m.stat.epochs_slope}}},
          {"parallel",
           {{"c0", m.parallel.base_s},
            {"c_b", m.parallel.per_sample_s},
            {"c_K", m.parallel.per_worker_s}}},
          {"flags", m.stat.flags()}};
}

struct Overhead {
  double time_s = 0.0;
  double cost_usd = 0.0;
};

// Restore plus profiling terms, recomputed from the exploration log.
Overhead closed_form_overhead(const std::vector<Exploration>& explored,
                              const SimCluster& cluster) {
  Overhead o;
  for (const auto& e : explored) {
    const double t = e.restore_s + static_cast<double>(e.iterations) *
                                       e.mean_iteration_time_s;
    o.time_s += t;
    o.cost_usd += t / 3600.0 *
                  hourly_cluster_price(cluster.pricing, cluster.shape, e.config.workers);
  }
  return o;
}

void compare_with_oracle(const Scenario& s, const JobConfig& chosen,
                         const Recommendation& oracle, double overhead_time_s,
                         double overhead_cost_usd, Json& doc) {
  const Prediction truth = ground_truth(s.workload, s.cluster, chosen);
  doc["ground_truth"] = {{"time_s", truth.total_time_s}, {"cost_usd", truth.cost_usd}};
  const double e2e_time = overhead_time_s + truth.total_time_s;
  const double e2e_cost = overhead_cost_usd + truth.cost_usd;
  doc["end_to_end"] = {{"time_s", e2e_time}, {"cost_usd", e2e_cost}};
  if (!oracle.chosen) {
    doc["oracle"] = nullptr;
    return;
  }
  doc["oracle"] = point_json(*oracle.chosen);
  doc["matches_oracle"] = oracle.chosen->config == chosen;
  doc["gap"] = {{"time_rel", e2e_time / oracle.chosen->time_s - 1.0},
                {"cost_rel", oracle.chosen->cost_usd > 0.0
                                 ? Json(e2e_cost / oracle.chosen->cost_usd - 1.0)
                                 : Json(nullptr)}};
}

}  // namespace

std::string_view to_string(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::kFull: return "full";
    case ScenarioMode::kPartial: return "partial";
    case ScenarioMode::kScavenger: return "scavenger";
    case ScenarioMode::kNone: return "none";
  }
  return "partial";
}

Scenario parse_scenario(const Json& doc) {
  const Reader r(doc, "");
  r.allow({"workload", "seed", "cluster", "bounds", "search", "objective"});
  Scenario s;
  std::optional<std::string> preset;
  read_workload(r.child("workload"), s, preset);
  const std::int64_t seed = r.integer("seed", 0);
  if (seed < 0) r.bad("seed", "must be >= 0");
  s.workload.seed = static_cast<std::uint64_t>(seed);

  if (preset) {
    s.cluster.restore_overhead_s = preset_restore_overhead_s(*preset);
    s.bounds = preset_bounds(*preset);
  } else if (!r.has("bounds")) {
    r.bad("bounds", "missing (required without a preset)");
  }
  if (r.has("cluster")) read_cluster(r.child("cluster"), s);
  if (r.has("bounds")) read_bounds(r.child("bounds"), s.bounds);
  if (r.has("search")) {
    read_search(r.child("search"), s);
  } else {
    s.fingerprint = s.workload.name;
  }
  if (r.has("objective")) read_objective(r.child("objective"), s);
  s.params.mode = s.mode == ScenarioMode::kFull      ? SearchMode::kFull
                  : s.mode == ScenarioMode::kNone    ? SearchMode::kNone
                                                     : SearchMode::kPartial;

  // Cross-checks between sections.
  const auto candidates = enumerate_candidates(s.bounds).valid;
  if (candidates.empty()) {
    r.bad("bounds", "no (K, B) pair in the bounds has B divisible by K");
  }
  for (const auto& c : candidates) {
    const Prediction p = ground_truth(s.workload, s.cluster, c);
    if (!(p.normalized_noise > 0.0 && p.epochs > 0.0 && p.iteration_time_s > 0.0)) {
      r.bad("workload", "ground truth is not positive at " + to_string(c) +
                            " inside the bounds");
    }
  }
  return s;
}

Scenario read_scenario_file(const std::string& path) {
  const std::string text = read_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, path + ": malformed JSON (" + e.what() + ")");
  }
  return parse_scenario(doc);
}

std::vector<TradeoffPoint> ground_truth_points(const SimWorkload& workload,
                                               const SimCluster& cluster,
                                               const SearchBounds& bounds) {
  std::vector<TradeoffPoint> points;
  for (const auto& c : enumerate_candidates(bounds).valid) {
    const Prediction p = ground_truth(workload, cluster, c);
    points.push_back({c, p.total_time_s, p.cost_usd});
  }
  return points;
}

ScenarioReport run_scenario(const Scenario& s) {
  ScenarioReport report;
  Json& doc = report.document;
  doc["mode"] = std::string(to_string(s.mode));
  doc["workload"] = s.workload.name;
  doc["seed"] = s.workload.seed;
  doc["objective"] = {{"kind", std::string(to_string(s.objective.kind))},
                      {"limit", s.objective.limit}};
  const auto candidates = enumerate_candidates(s.bounds);
  doc["candidates"] = {{"valid", candidates.valid.size()},
                       {"rejected", candidates.rejected.size()}};

  const Constraints constraints = [&] {
    Constraints c = s.constraints;
    c.bounds = s.bounds;
    return c;
  }();
  const auto truth_points = ground_truth_points(s.workload, s.cluster, s.bounds);

  if (s.mode == ScenarioMode::kScavenger) {
    Simulator sim(s.workload, s.cluster);
    const ScavengerResult r =
        scavenger_scaling(sim, s.bounds, s.params, s.cluster.pricing, s.cluster.shape);
    doc["chosen"] = config_json(r.chosen);
    doc["feasible"] = true;
    Json knees = Json::array();
    for (const auto& k : r.knees) {
      Json j = point_json(k.point);
      j["method"] = std::string(to_string(k.method));
      knees.push_back(j);
    }
    doc["knees"] = knees;
    Json evaluated = Json::array();
    for (const auto& p : r.evaluated) evaluated.push_back(point_json(p));
    doc["evaluated"] = evaluated;
    Json explored = Json::array();
    for (const auto& e : r.explored) explored.push_back(exploration_json(e));
    doc["explored"] = explored;
    const Overhead closed = closed_form_overhead(r.explored, s.cluster);
    doc["overhead"] = {{"time_s", r.overhead_time_s},
                       {"cost_usd", r.overhead_cost_usd},
                       {"closed_form_time_s", closed.time_s},
                       {"closed_form_cost_usd", closed.cost_usd}};
    const Recommendation oracle =
        select(truth_points, Objective::min_cost_time(), constraints);
    compare_with_oracle(s, r.chosen, oracle, r.overhead_time_s, r.overhead_cost_usd,
                        doc);
    return report;
  }

  SearchOutcome out;
  if (s.mode == ScenarioMode::kNone) {
    const ModelStore store(*s.store_dir);
    out.mode = SearchMode::kNone;
    out.model = no_search(store, s.fingerprint, s.allow_universal,
                          s.workload.dataset_size);
    for (const auto& c : candidates.valid) {
      try {
        const Prediction p = predict(out.model, c, s.cluster.pricing, s.cluster.shape);
        out.tradeoff_points.push_back({c, p.total_time_s, p.cost_usd});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kOutOfDomain) throw;
        out.skipped.push_back(c);
      }
    }
    if (out.tradeoff_points.empty()) {
      fail(ErrorCode::kSearchFailed, "stored model predicts no valid configuration");
    }
    out.recommendation = select(out.tradeoff_points, s.objective, constraints);
    if (out.recommendation.chosen) out.chosen = out.recommendation.chosen->config;
  } else {
    Simulator sim(s.workload, s.cluster);
    out = s.mode == ScenarioMode::kFull
              ? full_search(sim, s.bounds, s.params, s.objective, s.cluster.pricing,
                            s.cluster.shape, constraints)
              : partial_search(sim, s.bounds, s.params, s.objective,
                               s.cluster.pricing, s.cluster.shape, constraints);
    if (s.save_model) {
      ModelStore store(*s.store_dir);
      StoredModel stored;
      stored.fingerprint = s.fingerprint;
      stored.model = out.model;
      stored.model.fingerprint = s.fingerprint;
      stored.created_at = format_rfc3339(std::chrono::system_clock::now());
      store.save(stored);
    }
  }

  doc["model"] = model_json(out.model);
  doc["feasible"] = out.recommendation.feasible();
  doc["chosen"] = out.chosen ? config_json(*out.chosen) : Json(nullptr);
  doc["predicted"] = out.recommendation.chosen ? point_json(*out.recommendation.chosen)
                                               : Json(nullptr);
  doc["feasible_count"] = out.recommendation.feasible_count;
  if (out.recommendation.nearest_miss) {
    doc["nearest_miss"] = point_json(*out.recommendation.nearest_miss);
  }
  if (out.warmup) doc["warmup"] = exploration_json(*out.warmup);
  Json explored = Json::array();
  for (const auto& e : out.explored) explored.push_back(exploration_json(e));
  doc["explored"] = explored;
  Json skipped = Json::array();
  for (const auto& c : out.skipped) skipped.push_back(config_json(c));
  doc["skipped"] = skipped;
  Json curve = Json::array();
  for (const auto& p : out.tradeoff_points) curve.push_back(point_json(p));
  doc["tradeoff_points"] = curve;
  const Overhead closed = closed_form_overhead(out.explored, s.cluster);
  doc["overhead"] = {{"time_s", out.overhead_time_s},
                     {"cost_usd", out.overhead_cost_usd},
                     {"closed_form_time_s", closed.time_s},
                     {"closed_form_cost_usd", closed.cost_usd}};
  doc["productive_iterations"] = out.productive_iterations;

  report.feasible = out.recommendation.feasible();
  if (out.chosen) {
    const Recommendation oracle = select(truth_points, s.objective, constraints);
    compare_with_oracle(s, *out.chosen, oracle, out.overhead_time_s,
                        out.overhead_cost_usd, doc);
  }
  return report;
}

}  // namespace costtune
