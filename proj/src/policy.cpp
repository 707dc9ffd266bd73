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

#include "costtune/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "costtune/error.hpp"

namespace costtune {
namespace {

bool tie_order(const TradeoffPoint& a, const TradeoffPoint& b) {
  return std::tie(a.cost_usd, a.time_s, a.config.workers,
                  a.config.global_batch) <
         std::tie(b.cost_usd, b.time_s, b.config.workers,
                  b.config.global_batch);
}

template <typename Key>
TradeoffPoint argmin_by(std::span<const TradeoffPoint> pts, Key key) {
  const TradeoffPoint* best = &pts.front();
  for (const auto& p : pts) {
    const double kp = key(p);
    const double kb = key(*best);
    if (kp < kb || (kp == kb && tie_order(p, *best))) best = &p;
  }
  return *best;
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kDeadline: return "deadline";
    case ObjectiveKind::kBudget: return "budget";
    case ObjectiveKind::kKneePoint: return "knee";
    case ObjectiveKind::kMinCostTime: return "min-cost-time";
  }
  return "min-cost-time";
}

ObjectiveKind objective_kind_from_string(std::string_view s) {
  if (s == "deadline") return ObjectiveKind::kDeadline;
  if (s == "budget") return ObjectiveKind::kBudget;
  if (s == "knee" || s == "knee_point" || s == "knee-point") {
    return ObjectiveKind::kKneePoint;
  }
  if (s == "min-cost-time" || s == "min_cost_time") {
    return ObjectiveKind::kMinCostTime;
  }
  fail(ErrorCode::kValidation, "unknown objective '" + std::string(s) + "'");
}

Objective Objective::deadline(double max_time_s) {
  return {ObjectiveKind::kDeadline, max_time_s};
}
Objective Objective::budget(double max_cost_usd) {
  return {ObjectiveKind::kBudget, max_cost_usd};
}
Objective Objective::knee_point() { return {ObjectiveKind::kKneePoint, 0.0}; }
Objective Objective::min_cost_time() {
  return {ObjectiveKind::kMinCostTime, 0.0};
}

void validate(const Objective& objective) {
  if ((objective.kind == ObjectiveKind::kDeadline ||
       objective.kind == ObjectiveKind::kBudget) &&
      !(objective.limit > 0.0)) {
    fail(ErrorCode::kValidation,
         std::string(to_string(objective.kind)) + " limit must be > 0");
  }
}

Recommendation select(std::span<const TradeoffPoint> points,
                      const Objective& objective,
                      const Constraints& constraints) {
  if (points.empty()) {
    fail(ErrorCode::kEmptyInput, "no tradeoff points to select from");
  }
  validate(objective);

  double max_time = std::numeric_limits<double>::infinity();
  double max_cost = std::numeric_limits<double>::infinity();
  if (objective.kind == ObjectiveKind::kDeadline) max_time = objective.limit;
  if (objective.kind == ObjectiveKind::kBudget) max_cost = objective.limit;
  if (constraints.deadline_s) max_time = std::min(max_time, *constraints.deadline_s);
  if (constraints.budget_usd) max_cost = std::min(max_cost, *constraints.budget_usd);

  std::vector<TradeoffPoint> in_bounds;
  for (const auto& p : points) {
    if (!constraints.bounds || contains(*constraints.bounds, p.config)) {
      in_bounds.push_back(p);
    }
  }

  std::vector<TradeoffPoint> feasible;
  for (const auto& p : in_bounds) {
    if (p.time_s <= max_time && p.cost_usd <= max_cost) feasible.push_back(p);
  }

  Recommendation rec;
  rec.objective = objective;
  rec.feasible_count = feasible.size();

  if (feasible.empty()) {
    if (!in_bounds.empty()) {
      auto violation = [&](const TradeoffPoint& p) {
        double v = 0.0;
        if (std::isfinite(max_time)) v += std::max(0.0, p.time_s / max_time - 1.0);
        if (std::isfinite(max_cost)) v += std::max(0.0, p.cost_usd / max_cost - 1.0);
        return v;
      };
      rec.nearest_miss = argmin_by(in_bounds, violation);
    }
    return rec;
  }

  switch (objective.kind) {
    case ObjectiveKind::kDeadline:
      rec.chosen = argmin_by(feasible, [](const auto& p) { return p.cost_usd; });
      break;
    case ObjectiveKind::kBudget:
      rec.chosen = argmin_by(feasible, [](const auto& p) { return p.time_s; });
      break;
    case ObjectiveKind::kMinCostTime:
      rec.chosen = argmin_by(
          feasible, [](const auto& p) { return p.time_s * p.cost_usd; });
      break;
    case ObjectiveKind::kKneePoint: {
      const auto front = pareto_frontier(feasible);
      rec.knee = kneedle_knee(TradeoffCurve::build(front));
      rec.chosen = rec.knee->point;
      break;
    }
  }
  return rec;
}

}  // namespace costtune
