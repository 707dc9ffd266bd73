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

#ifndef COSTTUNE_TRADEOFF_HPP_
#define COSTTUNE_TRADEOFF_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "costtune/config.hpp"

namespace costtune {

struct TradeoffPoint {
  JobConfig config;
  double time_s = 0.0;
  double cost_usd = 0.0;

  friend bool operator==(const TradeoffPoint&, const TradeoffPoint&) = default;
};

/// Points strictly ascending in time. Points sharing a time are collapsed to
/// the cheapest one (then fewer workers, then smaller batch).
struct TradeoffCurve {
  std::optional<int> fixed_batch;
  std::vector<TradeoffPoint> points;

  static TradeoffCurve build(std::vector<TradeoffPoint> points,
                             std::optional<int> fixed_batch = std::nullopt);
};

enum class KneeMethod { kKneedle, kFallbackMinCostTime };

std::string_view to_string(KneeMethod m);

struct KneeResult {
  TradeoffPoint point;
  std::size_t index = 0;  // position within the curve
  KneeMethod method = KneeMethod::kKneedle;
  // Kneedle difference curve aligned with the curve points; empty on the
  // fallback path. Secondary local maxima remain visible here.
  std::vector<double> difference;
};

// Non-dominated points, ascending by time. Throws kEmptyInput.
std::vector<TradeoffPoint> pareto_frontier(std::span<const TradeoffPoint> points);

// Offline kneedle without smoothing: normalize, map to increasing-concave
// form, take the global argmax of the difference curve.
KneeResult kneedle_knee(const TradeoffCurve& curve);

// argmin time * cost; ties go to smaller time, then cost, then K, then B.
TradeoffPoint min_cost_time(std::span<const TradeoffPoint> points);

}  // namespace costtune

#endif  // COSTTUNE_TRADEOFF_HPP_
