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

#include "costtune/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "costtune/config.hpp"
#include "costtune/error.hpp"
#include "costtune/json_io.hpp"
#include "costtune/model_store.hpp"
#include "costtune/perf_model.hpp"
#include "costtune/policy.hpp"
#include "costtune/scenario.hpp"
#include "costtune/simulator.hpp"
#include "costtune/trace_io.hpp"
#include "costtune/tradeoff.hpp"

namespace costtune {
namespace {

namespace fs = std::filesystem;

struct GridOptions {
  int workers_min = 8;
  int workers_max = 20;
  int workers_step = 4;
  int batch_min = 384;
  int batch_max = 1024;
  std::vector<int> batches;
  std::vector<std::string> configs;  // explicit "K,B" pairs
};

struct PricingOptions {
  double per_vm = 0.13402;
  std::optional<double> per_vcpu;
  std::optional<double> per_gb;
  int vcpus = 4;
  double memory_gb = 16.0;
};

void add_grid(CLI::App* cmd, GridOptions& g, bool with_configs) {
  cmd->add_option("--workers-min", g.workers_min, "smallest K of the grid")
      ->capture_default_str();
  cmd->add_option("--workers-max", g.workers_max, "largest K of the grid")
      ->capture_default_str();
  cmd->add_option("--workers-step", g.workers_step, "K step")->capture_default_str();
  cmd->add_option("--batch-min", g.batch_min, "smallest B")->capture_default_str();
  cmd->add_option("--batch-max", g.batch_max, "largest B")->capture_default_str();
  cmd->add_option("--batches", g.batches,
                  "explicit B candidates (default 384 512 768 1024 unless "
                  "--batch-min/--batch-max are given)");
  if (with_configs) {
    cmd->add_option("--config", g.configs, "K,B pair; repeatable. Replaces the grid");
  }
}

void add_pricing(CLI::App* cmd, PricingOptions& p) {
  cmd->add_option("--price-per-vm", p.per_vm, "flat $/hr per worker VM")
      ->capture_default_str();
  cmd->add_option("--price-per-vcpu", p.per_vcpu, "$/hr per vCPU (per-resource mode)");
  cmd->add_option("--price-per-gb", p.per_gb, "$/hr per GB (per-resource mode)");
  cmd->add_option("--vcpus", p.vcpus, "vCPUs per VM")->capture_default_str();
  cmd->add_option("--memory-gb", p.memory_gb, "memory per VM")->capture_default_str();
}

SearchBounds bounds_from(const GridOptions& g, const CLI::App* cmd) {
  SearchBounds b{g.workers_min, g.workers_max, g.workers_step, g.batch_min,
                 g.batch_max, g.batches};
  const bool range_given =
      cmd->count("--batch-min") > 0 || cmd->count("--batch-max") > 0;
  if (b.batch_candidates.empty() && !range_given) {
    b.batch_candidates = {384, 512, 768, 1024};
  }
  validate(b);
  return b;
}

PricingModel pricing_from(const PricingOptions& p) {
  PricingModel m = (p.per_vcpu || p.per_gb)
                       ? PricingModel::per_resource(p.per_vcpu.value_or(0.0),
                                                    p.per_gb.value_or(0.0))
                       : PricingModel::flat(p.per_vm);
  validate(m);
  return m;
}

VMShape shape_from(const PricingOptions& p) {
  VMShape s{p.vcpus, p.memory_gb};
  validate(s);
  return s;
}

JobConfig parse_config(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    fail(ErrorCode::kUsage, "--config expects K,B but got '" + text + "'");
  }
  JobConfig c;
  try {
    std::size_t used = 0;
    c.workers = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    const std::string rest = text.substr(comma + 1);
    c.global_batch = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    fail(ErrorCode::kUsage, "--config expects integers K,B but got '" + text + "'");
  }
  return c;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) row.push_back(',');
    first = false;
    row += c;
  }
  row.push_back('\n');
  return row;
}

// ---------------------------------------------------------------- fit

struct FitOptions {
  std::vector<std::string> traces;
  std::string anchors;
  std::string out;
  std::string store;
  std::string fingerprint = "default";
  std::string created_at;
  std::int64_t dataset_size = 0;
};

int cmd_fit(const FitOptions& o, std::ostream& out) {
  if (o.out.empty() && o.store.empty()) {
    fail(ErrorCode::kUsage, "fit needs --out or --store");
  }
  std::vector<Trace> traces;
  for (const auto& path : o.traces) traces.push_back(read_trace_file(path));
  AnchorSet anchors;
  if (!o.anchors.empty()) anchors = read_anchors_file(o.anchors);
  std::int64_t dataset = o.dataset_size;
  if (dataset == 0 && anchors.dataset_size) dataset = *anchors.dataset_size;
  if (dataset == 0) {
    fail(ErrorCode::kUsage,
         "dataset size unknown: pass --dataset-size or add it to the anchors file");
  }
  const TraceFitReport report = fit_traces(traces, anchors, dataset);

  StoredModel stored;
  stored.fingerprint = o.fingerprint;
  stored.model = report.model;
  stored.model.fingerprint = o.fingerprint;
  stored.created_at = o.created_at.empty()
                          ? format_rfc3339(std::chrono::system_clock::now())
                          : o.created_at;
  if (!o.out.empty()) write_model_file(o.out, stored);
  if (!o.store.empty()) ModelStore(o.store).save(stored);

  Json diag;
  diag["fingerprint"] = o.fingerprint;
  diag["model"] = to_document(stored);
  Json rows = Json::array();
  for (const auto& t : report.traces) {
    rows.push_back({{"K", t.config.workers},
                    {"B", t.config.global_batch},
                    {"samples", t.samples},
                    {"normalized_noise", t.normalized_noise},
                    {"iteration_time_s", t.iteration_time_s},
                    {"noise_residual", t.noise_residual},
                    {"time_residual_s", t.time_residual}});
  }
  diag["traces"] = rows;
  diag["flags"] = report.flags;
  out << dump_json(diag) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- predict

struct TableOptions {
  std::string model;
  GridOptions grid;
  PricingOptions pricing;
  std::string format = "csv";
  std::string out;
};

int cmd_predict(const TableOptions& o, const CLI::App* cmd, std::ostream& out,
                std::ostream& err) {
  const PerfModel model = read_model_file(o.model).model;
  const PricingModel pricing = pricing_from(o.pricing);
  const VMShape shape = shape_from(o.pricing);

  std::vector<JobConfig> configs;
  if (!o.grid.configs.empty()) {
    for (const auto& c : o.grid.configs) configs.push_back(parse_config(c));
  } else {
    const CandidateSet set = enumerate_candidates(bounds_from(o.grid, cmd));
    configs = set.valid;
    if (!set.rejected.empty()) {
      err << "note: " << set.rejected.size()
          << " grid pairs skipped because B is not divisible by K\n";
    }
  }
  std::sort(configs.begin(), configs.end());
  configs.erase(std::unique(configs.begin(), configs.end()), configs.end());

  bool partial_failure = false;
  Json rows = Json::array();
  std::string csv =
      "K,B,b,noise,epochs,iterations,tau_s,time_s,cost_usd,status\n";
  for (const auto& c : configs) {
    Json row = {{"K", c.workers}, {"B", c.global_batch}};
    try {
      const Prediction p = predict(model, c, pricing, shape);
      const int b = mini_batch(c);
      row["b"] = b;
      row["noise"] = p.normalized_noise;
      row["epochs"] = p.epochs;
      row["iterations"] = p.iterations;
      row["tau_s"] = p.iteration_time_s;
      row["time_s"] = p.total_time_s;
      row["cost_usd"] = p.cost_usd;
      row["status"] = "ok";
      csv += csv_row({std::to_string(c.workers), std::to_string(c.global_batch),
                      std::to_string(b), format_short(p.normalized_noise),
                      format_short(p.epochs),
                      format_short(std::ceil(p.iterations)),
                      format_short(p.iteration_time_s), format_short(p.total_time_s),
                      format_short(p.cost_usd), "ok"});
    } catch (const Error& e) {
      partial_failure = true;
      const std::string marker = "error:" + std::string(to_string(e.code()));
      row["status"] = marker;
      row["message"] = e.what();
      csv += csv_row({std::to_string(c.workers), std::to_string(c.global_batch), "",
                      "", "", "", "", "", "", marker});
      err << "error: " << to_string(c) << ": " << e.what() << "\n";
    }
    rows.push_back(row);
  }
  if (o.format == "json") {
    emit(dump_json(Json{{"rows", rows}}) + "\n", o.out, out);
  } else {
    emit(csv, o.out, out);
  }
  return partial_failure ? exit_code(ErrorCode::kValidation) : kExitOk;
}

// Predicted points over the grid; out-of-domain configurations are reported
// and left out.
std::vector<TradeoffPoint> predicted_points(const PerfModel& model,
                                            const SearchBounds& bounds,
                                            const PricingModel& pricing,
                                            const VMShape& shape, std::ostream& err) {
  std::vector<TradeoffPoint> points;
  for (const auto& c : enumerate_candidates(bounds).valid) {
    try {
      const Prediction p = predict(model, c, pricing, shape);
      points.push_back({c, p.total_time_s, p.cost_usd});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOutOfDomain) throw;
      err << "note: " << e.what() << "\n";
    }
  }
  if (points.empty()) fail(ErrorCode::kOutOfDomain, "no configuration is predictable");
  return points;
}

// ---------------------------------------------------------------- curves

int cmd_curves(const TableOptions& o, const CLI::App* cmd, std::ostream& out,
               std::ostream& err) {
  const PerfModel model = read_model_file(o.model).model;
  const auto points = predicted_points(model, bounds_from(o.grid, cmd),
                                       pricing_from(o.pricing), shape_from(o.pricing),
                                       err);
  const auto frontier = pareto_frontier(points);
  auto on_frontier = [&](const TradeoffPoint& p) {
    return std::find(frontier.begin(), frontier.end(), p) != frontier.end();
  };

  std::map<int, std::vector<TradeoffPoint>> by_batch;
  for (const auto& p : points) by_batch[p.config.global_batch].push_back(p);

  Json curves = Json::array();
  std::string csv = "B,K,b,time_s,cost_usd,pareto,knee,difference\n";
  for (const auto& [b, pts] : by_batch) {
    const TradeoffCurve curve = TradeoffCurve::build(pts, b);
    const KneeResult knee = kneedle_knee(curve);
    Json jpoints = Json::array();
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const TradeoffPoint& p = curve.points[i];
      const bool is_knee = i == knee.index;
      const bool has_diff = !knee.difference.empty();
      const double diff = has_diff ? knee.difference[i] : 0.0;
      jpoints.push_back({{"K", p.config.workers},
                         {"b", mini_batch(p.config)},
                         {"time_s", p.time_s},
                         {"cost_usd", p.cost_usd},
                         {"pareto", on_frontier(p)},
                         {"knee", is_knee},
                         {"difference", has_diff ? Json(diff) : Json(nullptr)}});
      csv += csv_row({std::to_string(b), std::to_string(p.config.workers),
                      std::to_string(mini_batch(p.config)), format_short(p.time_s),
                      format_short(p.cost_usd), on_frontier(p) ? "1" : "0",
                      is_knee ? "1" : "0", has_diff ? format_short(diff) : ""});
    }
    curves.push_back({{"B", b},
                      {"points", jpoints},
                      {"knee",
                       {{"K", knee.point.config.workers},
                        {"index", knee.index},
                        {"method", std::string(to_string(knee.method))}}}});
  }
  if (o.format == "json") {
    Json pareto = Json::array();
    for (const auto& p : frontier) {
      pareto.push_back({{"K", p.config.workers},
                        {"B", p.config.global_batch},
                        {"time_s", p.time_s},
                        {"cost_usd", p.cost_usd}});
    }
    emit(dump_json(Json{{"curves", curves}, {"pareto", pareto}}) + "\n", o.out, out);
  } else {
    emit(csv, o.out, out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- recommend

struct RecommendOptions {
  TableOptions table;
  std::string objective;
  std::optional<double> deadline;
  std::optional<double> budget;
};

Json point_json(const TradeoffPoint& p) {
  return {{"K", p.config.workers},
          {"B", p.config.global_batch},
          {"time_s", p.time_s},
          {"cost_usd", p.cost_usd}};
}

int cmd_recommend(const RecommendOptions& o, const CLI::App* cmd, std::ostream& out,
                  std::ostream& err) {
  Objective objective;
  if (o.objective.empty()) {
    if (o.deadline && o.budget) {
      fail(ErrorCode::kUsage,
           "--deadline and --budget together need --objective to say which to "
           "optimize");
    }
    objective = o.deadline ? Objective::deadline(*o.deadline)
                : o.budget ? Objective::budget(*o.budget)
                           : Objective::min_cost_time();
  } else {
    ObjectiveKind kind;
    try {
      kind = objective_kind_from_string(o.objective);
    } catch (const Error& e) {
      fail(ErrorCode::kUsage, e.what());
    }
    switch (kind) {
      case ObjectiveKind::kDeadline:
        if (!o.deadline) fail(ErrorCode::kUsage, "--objective deadline needs --deadline");
        objective = Objective::deadline(*o.deadline);
        break;
      case ObjectiveKind::kBudget:
        if (!o.budget) fail(ErrorCode::kUsage, "--objective budget needs --budget");
        objective = Objective::budget(*o.budget);
        break;
      case ObjectiveKind::kKneePoint:
        objective = Objective::knee_point();
        break;
      case ObjectiveKind::kMinCostTime:
        objective = Objective::min_cost_time();
        break;
    }
  }
  try {
    validate(objective);
  } catch (const Error& e) {
    fail(ErrorCode::kUsage, e.what());
  }
  Constraints constraints;
  constraints.deadline_s = o.deadline;
  constraints.budget_usd = o.budget;

  const PerfModel model = read_model_file(o.table.model).model;
  const auto points =
      predicted_points(model, bounds_from(o.table.grid, cmd),
                       pricing_from(o.table.pricing), shape_from(o.table.pricing), err);
  const Recommendation rec = select(points, objective, constraints);

  Json doc;
  doc["objective"] = {{"kind", std::string(to_string(objective.kind))},
                      {"limit", objective.limit}};
  doc["feasible"] = rec.feasible();
  doc["feasible_count"] = rec.feasible_count;
  doc["chosen"] = rec.chosen ? point_json(*rec.chosen) : Json(nullptr);
  if (rec.nearest_miss) doc["nearest_miss"] = point_json(*rec.nearest_miss);
  if (rec.knee) doc["knee_method"] = std::string(to_string(rec.knee->method));
  doc["constraints"] = {
      {"deadline_s", o.deadline ? Json(*o.deadline) : Json(nullptr)},
      {"budget_usd", o.budget ? Json(*o.budget) : Json(nullptr)}};
  emit(dump_json(doc) + "\n", o.table.out, out);
  return rec.feasible() ? kExitOk : kExitInfeasible;
}

// ---------------------------------------------------------------- search

int cmd_search(const std::string& scenario_path, const std::string& out_path,
               std::ostream& out) {
  const Scenario scenario = read_scenario_file(scenario_path);
  const ScenarioReport report = run_scenario(scenario);
  emit(dump_json(report.document) + "\n", out_path, out);
  return report.feasible ? kExitOk : kExitInfeasible;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string scenario;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<double> jitter;
  std::string out_dir;
  int iters = 20;
  std::optional<std::int64_t> start_iteration;
  std::string configs = "corners";
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  if (o.scenario.empty() == o.preset.empty()) {
    fail(ErrorCode::kUsage, "simulate needs exactly one of --scenario or --preset");
  }
  if (!o.scenario.empty() && (o.seed || o.jitter)) {
    fail(ErrorCode::kUsage,
         "--seed and --jitter cannot override a scenario; edit the scenario file");
  }
  if (o.iters < 1) fail(ErrorCode::kUsage, "--iters must be >= 1");
  SimWorkload workload;
  SimCluster cluster;
  SearchBounds bounds;
  if (!o.scenario.empty()) {
    const Scenario s = read_scenario_file(o.scenario);
    workload = s.workload;
    cluster = s.cluster;
    bounds = s.bounds;
  } else {
    workload = preset_workload(o.preset);
    cluster.restore_overhead_s = preset_restore_overhead_s(o.preset);
    bounds = preset_bounds(o.preset);
    if (o.seed) workload.seed = *o.seed;
    if (o.jitter) workload.jitter = *o.jitter;
    validate(workload);
  }
  const auto valid = enumerate_candidates(bounds).valid;
  std::vector<JobConfig> configs;
  int b_lo = valid.front().global_batch;
  int b_hi = b_lo;
  for (const auto& c : valid) {
    b_lo = std::min(b_lo, c.global_batch);
    b_hi = std::max(b_hi, c.global_batch);
  }
  std::vector<int> shared_k;
  for (int k : worker_values(bounds)) {
    if (is_valid({k, b_lo}) && is_valid({k, b_hi})) shared_k.push_back(k);
  }
  if (o.configs == "grid") {
    configs = valid;
  } else if (o.configs == "corners") {
    if (shared_k.size() < 2 || b_lo == b_hi) {
      fail(ErrorCode::kValidation,
           "bounds have no two worker counts dividing both extreme batch sizes");
    }
    configs = {{shared_k.front(), b_lo},
               {shared_k.front(), b_hi},
               {shared_k.back(), b_lo},
               {shared_k.back(), b_hi}};
  } else {
    fail(ErrorCode::kUsage, "--configs expects corners or grid");
  }

  const std::int64_t start =
      o.start_iteration.value_or(static_cast<std::int64_t>(
          std::ceil(20.0 * workload.ramp_iters)));
  Simulator sim(workload, cluster);
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) fail(ErrorCode::kStorage, "cannot create " + o.out_dir);

  Json manifest;
  manifest["workload"] = workload.name;
  manifest["seed"] = workload.seed;
  manifest["jitter"] = workload.jitter;
  manifest["traces"] = Json::array();
  for (const auto& c : configs) {
    const auto samples = sim.profile(c, o.iters, start);
    const std::string name = "trace_K" + std::to_string(c.workers) + "_B" +
                             std::to_string(c.global_batch) + ".jsonl";
    write_trace_file(fs::path(o.out_dir) / name, c, samples);
    manifest["traces"].push_back(name);
  }
  AnchorSet anchors;
  anchors.dataset_size = workload.dataset_size;
  const int anchor_k = shared_k.empty() ? valid.front().workers : shared_k.front();
  for (int b : {b_lo, b_hi}) {
    const JobConfig c{anchor_k, b};
    if (!is_valid(c)) continue;
    anchors.anchors.push_back({c, epochs_to_target(workload, c)});
    if (b_lo == b_hi) break;
  }
  write_anchors_file(fs::path(o.out_dir) / "anchors.json", anchors);
  manifest["anchors"] = "anchors.json";
  out << dump_json(manifest) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Cost/time tuning for elastic data-parallel training", "costtune"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a performance model from traces");
  fit_cmd->add_option("--trace", fit.traces, "JSON Lines trace file; repeatable")
      ->required();
  fit_cmd->add_option("--anchors", fit.anchors, "anchor epochs file");
  fit_cmd->add_option("--out", fit.out, "model document to write");
  fit_cmd->add_option("--store", fit.store, "model store directory to save into");
  fit_cmd->add_option("--fingerprint", fit.fingerprint, "workload fingerprint")
      ->capture_default_str();
  fit_cmd->add_option("--dataset-size", fit.dataset_size, "training samples D");
  fit_cmd->add_option("--created-at", fit.created_at, "RFC 3339 timestamp");

  TableOptions pred;
  auto* pred_cmd = app.add_subcommand("predict", "predict time and cost per config");
  pred_cmd->add_option("--model", pred.model, "model document")->required();
  add_grid(pred_cmd, pred.grid, true);
  add_pricing(pred_cmd, pred.pricing);
  pred_cmd->add_option("--format", pred.format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  pred_cmd->add_option("--out", pred.out, "output file (default stdout)");

  TableOptions curv;
  auto* curv_cmd = app.add_subcommand("curves", "per-B tradeoff curves with knees");
  curv_cmd->add_option("--model", curv.model, "model document")->required();
  add_grid(curv_cmd, curv.grid, false);
  add_pricing(curv_cmd, curv.pricing);
  curv_cmd->add_option("--format", curv.format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  curv_cmd->add_option("--out", curv.out, "output file (default stdout)");

  RecommendOptions rec;
  auto* rec_cmd = app.add_subcommand("recommend", "pick a configuration");
  rec_cmd->add_option("--model", rec.table.model, "model document")->required();
  add_grid(rec_cmd, rec.table.grid, false);
  add_pricing(rec_cmd, rec.table.pricing);
  rec_cmd->add_option("--objective", rec.objective,
                      "deadline, budget, knee or min-cost-time");
  rec_cmd->add_option("--deadline", rec.deadline, "time limit in seconds");
  rec_cmd->add_option("--budget", rec.budget, "cost limit in USD");
  rec_cmd->add_option("--out", rec.table.out, "output file (default stdout)");

  std::string scenario_path;
  std::string search_out;
  auto* search_cmd = app.add_subcommand("search", "run a simulated search scenario");
  search_cmd->add_option("--scenario", scenario_path, "scenario document")->required();
  search_cmd->add_option("--out", search_out, "output file (default stdout)");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "export simulator traces");
  sim_cmd->add_option("--scenario", sim.scenario, "scenario document");
  sim_cmd->add_option("--preset", sim.preset, "workload preset");
  sim_cmd->add_option("--seed", sim.seed, "simulator seed (preset only)");
  sim_cmd->add_option("--jitter", sim.jitter, "measurement jitter (preset only)");
  sim_cmd->add_option("--out-dir", sim.out_dir, "directory for traces")->required();
  sim_cmd->add_option("--iters", sim.iters, "steps per trace")->capture_default_str();
  sim_cmd->add_option("--start-iteration", sim.start_iteration,
                      "first step (default 20 ramp lengths)");
  sim_cmd->add_option("--configs", sim.configs, "corners or grid")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (pred_cmd->parsed()) return cmd_predict(pred, pred_cmd, out, err);
    if (curv_cmd->parsed()) return cmd_curves(curv, curv_cmd, out, err);
    if (rec_cmd->parsed()) return cmd_recommend(rec, rec_cmd, out, err);
    if (search_cmd->parsed()) return cmd_search(scenario_path, search_out, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  }
  return kExitUsage;
}

}  // namespace costtune
