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

#ifndef COSTTUNE_NOISE_HPP_
#define COSTTUNE_NOISE_HPP_

#include <cstdint>
#include <deque>
#include <vector>

namespace costtune {

/// One profiled training step on a K-worker cluster.
struct IterationSample {
  std::int64_t iteration = 0;
  std::vector<double> worker_sqnorms;  // ||g_t^(k)||^2, one per worker
  double aggregated_sqnorm = 0.0;      // ||mean_k g_t^(k)||^2
  double compute_time_s = 0.0;
  double sync_time_s = 0.0;

  int workers() const noexcept { return static_cast<int>(worker_sqnorms.size()); }
  double iteration_time_s() const noexcept { return compute_time_s + sync_time_s; }
};

// Throws kValidation for empty worker lists, negative norms or times.
void validate(const IterationSample& sample);

struct EwmaConfig {
  double alpha = 0.01;
  int warmup_iters = 1000;
  int stability_window = 200;
  double stability_rel_tol = 0.02;
};

void validate(const EwmaConfig& cfg);

/// Running state of the gradient-noise indicator for one configuration.
struct NoiseEstimate {
  double raw = 0.0;
  double smoothed = 0.0;
  double normalized = 0.0;  // smoothed / K
  std::int64_t samples_seen = 0;
  std::int64_t samples_skipped = 0;
  bool stabilized = false;
  int workers = 0;
  double raw_min = 0.0;
  double raw_max = 0.0;
  std::deque<double> recent_window;  // last W smoothed values
};

// mean_k ||g^(k)||^2 / ||g~||^2 for a single step. Throws kDegenerateGradient
// when the aggregated norm is zero.
double compute_raw_noise(const IterationSample& sample);

// EWMA update. A degenerate sample leaves the estimate untouched apart from
// the skip counter.
NoiseEstimate update(NoiseEstimate state, const IterationSample& sample,
                     const EwmaConfig& cfg);

// Warmup reached and (max - min) / max over a full trailing window <= tol.
bool is_stabilized(const NoiseEstimate& state, const EwmaConfig& cfg);

double window_spread(const std::deque<double>& window);

}  // namespace costtune

#endif  // COSTTUNE_NOISE_HPP_
