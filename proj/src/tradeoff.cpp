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

#include "costtune/tradeoff.hpp"

#include <algorithm>
#include <tuple>

#include "costtune/error.hpp"

namespace costtune {
namespace {

// Difference values closer than this are ties; keeps the knee index stable
// under rescaling, which perturbs d in the last few ulps.
constexpr double kDifferenceTieTol = 1e-12;

bool earlier(const TradeoffPoint& a, const TradeoffPoint& b) {
  return std::tie(a.time_s, a.cost_usd, a.config.workers,
                  a.config.global_batch) <
         std::tie(b.time_s, b.cost_usd, b.config.workers,
                  b.config.global_batch);
}

}  // namespace

std::string_view to_string(KneeMethod m) {
  return m == KneeMethod::kKneedle ? "kneedle" : "fallback_min_cost_time";
}

TradeoffCurve TradeoffCurve::build(std::vector<TradeoffPoint> points,
                                   std::optional<int> fixed_batch) {
  std::sort(points.begin(), points.end(), earlier);
  TradeoffCurve curve;
  curve.fixed_batch = fixed_batch;
  for (const auto& p : points) {
    // Sorted by (T, C, K, B): the first point at each time is the keeper.
    if (!curve.points.empty() && curve.points.back().time_s == p.time_s) {
      continue;
    }
    curve.points.push_back(p);
  }
  return curve;
}

std::vector<TradeoffPoint> pareto_frontier(
    std::span<const TradeoffPoint> points) {
  if (points.empty()) {
    fail(ErrorCode::kEmptyInput, "pareto frontier of an empty point set");
  }
  std::vector<TradeoffPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), earlier);
  std::vector<TradeoffPoint> front;
  for (const auto& p : sorted) {
    if (front.empty()) {
      front.push_back(p);
      continue;
    }
    const auto& last = front.back();
    // Everything kept so far has time <= p.time_s; the cheapest of those is
    // the last kept point. Exact duplicates of it are not dominated.
    if (p.cost_usd < last.cost_usd ||
        (p.cost_usd == last.cost_usd && p.time_s == last.time_s)) {
      front.push_back(p);
    }
  }
  return front;
}

TradeoffPoint min_cost_time(std::span<const TradeoffPoint> points) {
  if (points.empty()) {
    fail(ErrorCode::kEmptyInput, "min cost*time of an empty point set");
  }
  const TradeoffPoint* best = &points.front();
  for (const auto& p : points) {
    const double pv = p.time_s * p.cost_usd;
    const double bv = best->time_s * best->cost_usd;
    if (pv < bv || (pv == bv && earlier(p, *best))) best = &p;
  }
  return *best;
}

KneeResult kneedle_knee(const TradeoffCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) fail(ErrorCode::kEmptyInput, "knee of an empty curve");

  auto fallback = [&] {
    KneeResult r;
    r.point = min_cost_time(pts);
    r.index = static_cast<std::size_t>(
        std::find(pts.begin(), pts.end(), r.point) - pts.begin());
    r.method = KneeMethod::kFallbackMinCostTime;
    return r;
  };
  if (pts.size() < 3) return fallback();

  const double t0 = pts.front().time_s;
  const double t1 = pts.back().time_s;
  double c_lo = pts.front().cost_usd, c_hi = pts.front().cost_usd;
  for (const auto& p : pts) {
    c_lo = std::min(c_lo, p.cost_usd);
    c_hi = std::max(c_hi, p.cost_usd);
  }
  if (!(t1 > t0) || !(c_hi > c_lo)) return fallback();

  const std::size_t n = pts.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (pts[i].time_s - t0) / (t1 - t0);
    y[i] = (pts[i].cost_usd - c_lo) / (c_hi - c_lo);
  }

  const bool decreasing = y.back() <= y.front();
  double above_chord = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    above_chord += y[i] - (y.front() + (y.back() - y.front()) * x[i]);
  }
  const bool concave = above_chord / static_cast<double>(n - 2) > 0.0;

  KneeResult r;
  r.method = KneeMethod::kKneedle;
  r.difference.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double xc = x[i];
    double yc = y[i];
    if (decreasing && !concave) {
      yc = 1.0 - yc;
    } else if (!decreasing && !concave) {
      xc = 1.0 - xc;
      yc = 1.0 - yc;
    } else if (decreasing && concave) {
      xc = 1.0 - xc;
    }
    r.difference[i] = yc - xc;
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = r.difference[i] - r.difference[best];
    if (gap > kDifferenceTieTol) {
      best = i;
    } else if (gap >= -kDifferenceTieTol && earlier(pts[i], pts[best])) {
      best = i;
    }
  }
  r.index = best;
  r.point = pts[best];
  return r;
}

}  // namespace costtune
