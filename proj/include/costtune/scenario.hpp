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

#ifndef COSTTUNE_SCENARIO_HPP_
#define COSTTUNE_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "costtune/config.hpp"
#include "costtune/json_io.hpp"
#include "costtune/policy.hpp"
#include "costtune/search.hpp"
#include "costtune/simulator.hpp"

namespace costtune {

enum class ScenarioMode { kFull, kPartial, kScavenger, kNone };

std::string_view to_string(ScenarioMode mode);

/// A simulated tuning run declared in one JSON document. See README for the
/// schema; every field has a documented default except the workload.
struct Scenario {
  SimWorkload workload;
  SimCluster cluster;
  SearchBounds bounds;
  ScenarioMode mode = ScenarioMode::kPartial;
  SearchParams params;
  Objective objective;
  Constraints constraints;  // deadline / budget limits on top of the objective
  // Model store for mode "none", or where a fitted model is saved.
  std::optional<std::string> store_dir;
  std::string fingerprint;
  bool allow_universal = false;
  bool save_model = false;
};

// Parses and cross-validates a scenario. Errors are kValidation and start
// with the offending field path, e.g. "cluster.pricing.mode: ...".
Scenario parse_scenario(const Json& doc);
Scenario read_scenario_file(const std::string& path);

/// Outcome of a scenario plus its comparison against the exhaustive
/// ground-truth optimum.
struct ScenarioReport {
  Json document;
  bool feasible = true;
};

// Runs the scenario's search against a fresh simulator. The document is a
// deterministic function of the scenario.
ScenarioReport run_scenario(const Scenario& scenario);

// Ground-truth tradeoff points over every valid configuration in `bounds`.
std::vector<TradeoffPoint> ground_truth_points(const SimWorkload& workload,
                                               const SimCluster& cluster,
                                               const SearchBounds& bounds);

}  // namespace costtune

#endif  // COSTTUNE_SCENARIO_HPP_
