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

#ifndef COSTTUNE_POLICY_HPP_
#define COSTTUNE_POLICY_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "costtune/config.hpp"
#include "costtune/tradeoff.hpp"

namespace costtune {

enum class ObjectiveKind { kDeadline, kBudget, kKneePoint, kMinCostTime };

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(std::string_view s);

struct Objective {
  ObjectiveKind kind = ObjectiveKind::kMinCostTime;
  double limit = 0.0;  // T_max seconds for deadline, C_max $ for budget

  static Objective deadline(double max_time_s);
  static Objective budget(double max_cost_usd);
  static Objective knee_point();
  static Objective min_cost_time();
};

void validate(const Objective& objective);

struct Constraints {
  std::optional<SearchBounds> bounds;
  std::optional<double> deadline_s;
  std::optional<double> budget_usd;
};

struct Recommendation {
  std::optional<TradeoffPoint> chosen;  // empty when infeasible
  std::size_t feasible_count = 0;
  std::optional<TradeoffPoint> nearest_miss;
  Objective objective;
  std::optional<KneeResult> knee;  // set for the knee-point objective

  bool feasible() const noexcept { return chosen.has_value(); }
};

// Deadline: cheapest point meeting every active limit. Budget: fastest.
// Knee point: kneedle over the pareto frontier of the feasible points.
// Min cost*time: argmin T*C. Ties: cost, time, K, B. With no feasible point,
// reports the point with the smallest relative limit violation.
Recommendation select(std::span<const TradeoffPoint> points,
                      const Objective& objective,
                      const Constraints& constraints = {});

}  // namespace costtune

#endif  // COSTTUNE_POLICY_HPP_
