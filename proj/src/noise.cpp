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

#include "costtune/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "costtune/error.hpp"

namespace costtune {

void validate(const IterationSample& sample) {
  if (sample.worker_sqnorms.empty()) {
    fail(ErrorCode::kValidation, "sample at iteration " +
                                     std::to_string(sample.iteration) +
                                     " has no worker gradient norms");
  }
  for (double v : sample.worker_sqnorms) {
    if (!(v >= 0.0)) {
      fail(ErrorCode::kValidation, "worker squared norms must be >= 0");
    }
  }
  if (!(sample.aggregated_sqnorm >= 0.0)) {
    fail(ErrorCode::kValidation, "aggregated squared norm must be >= 0");
  }
  if (!(sample.compute_time_s >= 0.0) || !(sample.sync_time_s >= 0.0)) {
    fail(ErrorCode::kValidation, "step times must be >= 0");
  }
}

void validate(const EwmaConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    fail(ErrorCode::kValidation, "ewma alpha must lie in (0, 1]");
  }
  if (cfg.warmup_iters < 1) {
    fail(ErrorCode::kValidation, "ewma warmup must be >= 1");
  }
  if (cfg.stability_window < 2) {
    fail(ErrorCode::kValidation, "stability window must be >= 2");
  }
  if (!(cfg.stability_rel_tol > 0.0)) {
    fail(ErrorCode::kValidation, "stability tolerance must be > 0");
  }
}

double compute_raw_noise(const IterationSample& sample) {
  validate(sample);
  if (sample.aggregated_sqnorm == 0.0) {
    fail(ErrorCode::kDegenerateGradient,
         "aggregated gradient is zero at iteration " +
             std::to_string(sample.iteration));
  }
  const double sum = std::accumulate(sample.worker_sqnorms.begin(),
                                     sample.worker_sqnorms.end(), 0.0);
  const double mean = sum / static_cast<double>(sample.worker_sqnorms.size());
  return mean / sample.aggregated_sqnorm;
}

double window_spread(const std::deque<double>& window) {
  if (window.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
  if (*hi == *lo) return 0.0;
  return (*hi - *lo) / *hi;
}

NoiseEstimate update(NoiseEstimate state, const IterationSample& sample,
                     const EwmaConfig& cfg) {
  double raw = 0.0;
  try {
    raw = compute_raw_noise(sample);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateGradient) throw;
    ++state.samples_skipped;
    return state;
  }
  if (state.samples_seen == 0) {
    state.workers = sample.workers();
    state.smoothed = raw;
    state.raw_min = raw;
    state.raw_max = raw;
  } else {
    if (sample.workers() != state.workers) {
      fail(ErrorCode::kConfigInvalid,
           "sample has " + std::to_string(sample.workers()) +
               " workers but the estimate tracks " +
               std::to_string(state.workers));
    }
    state.smoothed = cfg.alpha * raw + (1.0 - cfg.alpha) * state.smoothed;
    state.raw_min = std::min(state.raw_min, raw);
    state.raw_max = std::max(state.raw_max, raw);
    // Rounding can push the convex combination one ulp outside the hull.
    state.smoothed = std::clamp(state.smoothed, state.raw_min, state.raw_max);
  }
  state.raw = raw;
  state.normalized = state.smoothed / state.workers;
  ++state.samples_seen;
  state.recent_window.push_back(state.smoothed);
  while (static_cast<int>(state.recent_window.size()) > cfg.stability_window) {
    state.recent_window.pop_front();
  }
  state.stabilized = is_stabilized(state, cfg);
  return state;
}

bool is_stabilized(const NoiseEstimate& state, const EwmaConfig& cfg) {
  if (state.samples_seen < cfg.warmup_iters) return false;
  if (static_cast<int>(state.recent_window.size()) < cfg.stability_window) {
    return false;
  }
  return window_spread(state.recent_window) <= cfg.stability_rel_tol;
}

}  // namespace costtune
