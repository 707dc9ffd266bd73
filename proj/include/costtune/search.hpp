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

#ifndef COSTTUNE_SEARCH_HPP_
#define COSTTUNE_SEARCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "costtune/config.hpp"
#include "costtune/environment.hpp"
#include "costtune/noise.hpp"
#include "costtune/perf_model.hpp"
#include "costtune/policy.hpp"
#include "costtune/tradeoff.hpp"

namespace costtune {

class ModelStore;

enum class SearchMode { kFull, kPartial, kNone };

std::string_view to_string(SearchMode mode);

struct Sampling {
  enum class Kind { kGrid, kRandom };
  Kind kind = Kind::kGrid;
  std::uint64_t seed = 0;
  int bspace = 0;
  int kspace = 0;
};

struct SearchParams {
  SearchMode mode = SearchMode::kPartial;
  int profile_iters = 20;
  Sampling sampling;
  EwmaConfig ewma;
  // Anchor runs that never stabilize give up after this many steps.
  std::int64_t max_stabilization_iters = 200000;
};

void validate(const SearchParams& params);

enum class ExplorationKind { kWarmup, kAnchor, kProfile };

std::string_view to_string(ExplorationKind kind);

/// One contiguous run of the job on a configuration during the search.
struct Exploration {
  JobConfig config;
  ExplorationKind kind = ExplorationKind::kProfile;
  std::int64_t start_iteration = 0;
  std::int64_t iterations = 0;
  double restore_s = 0.0;
  double mean_iteration_time_s = 0.0;
  double normalized_noise = 0.0;  // stabilized EWMA for anchors, mean otherwise
  bool stabilized = false;
  double cost_usd = 0.0;

  // restore + iterations * mean step time
  double time_s() const noexcept {
    return restore_s + static_cast<double>(iterations) * mean_iteration_time_s;
  }
};

struct SearchOutcome {
  SearchMode mode = SearchMode::kPartial;
  std::optional<JobConfig> chosen;
  Recommendation recommendation;
  PerfModel model;
  // Full search only: the job's initial run until the noise settles. Training
  // progress, not search overhead.
  std::optional<Exploration> warmup;
  std::vector<Exploration> explored;
  std::vector<JobConfig> skipped;
  std::vector<TradeoffPoint> tradeoff_points;
  double overhead_time_s = 0.0;
  double overhead_cost_usd = 0.0;
  std::int64_t productive_iterations = 0;
};

// Profiles every valid grid configuration after an initial stabilization run.
SearchOutcome full_search(ProfilingEnvironment& env, const SearchBounds& bounds,
                          const SearchParams& params, const Objective& objective,
                          const PricingModel& pricing, const VMShape& shape,
                          const Constraints& constraints = {});

// Two stabilized anchors at the extreme batch sizes plus four timing corners;
// every other configuration is predicted from the fitted model.
SearchOutcome partial_search(ProfilingEnvironment& env, const SearchBounds& bounds,
                             const SearchParams& params, const Objective& objective,
                             const PricingModel& pricing, const VMShape& shape,
                             const Constraints& constraints = {});

struct ScavengerResult {
  JobConfig chosen;
  std::vector<KneeResult> knees;  // one per surviving batch size
  std::vector<TradeoffPoint> evaluated;
  StatFit stat;
  std::vector<Exploration> explored;
  double overhead_time_s = 0.0;
  double overhead_cost_usd = 0.0;
};

// Online scaling loop: anchors, fits, K sweeps per sampled B with measured
// step times, a kneedle knee per B, then the knee with least cost * time.
ScavengerResult scavenger_scaling(ProfilingEnvironment& env,
                                  const SearchBounds& bounds,
                                  const SearchParams& params,
                                  const PricingModel& pricing,
                                  const VMShape& shape);

// Stored model for `fingerprint`, else the store's universal average when
// allowed (with `dataset_size` from the requesting job), else kNotFound.
PerfModel no_search(const ModelStore& store, const std::string& fingerprint,
                    bool allow_universal, std::int64_t dataset_size);

}  // namespace costtune

#endif  // COSTTUNE_SEARCH_HPP_
