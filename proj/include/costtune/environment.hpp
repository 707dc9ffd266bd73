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

#ifndef COSTTUNE_ENVIRONMENT_HPP_
#define COSTTUNE_ENVIRONMENT_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "costtune/config.hpp"
#include "costtune/noise.hpp"

namespace costtune {

/// Something that can run a training job on a configuration for a few steps
/// and report per-step scaling indicators. Calls are sequential: a cluster
/// runs one configuration at a time, and implementations may derive their
/// trace stream from the call order.
class ProfilingEnvironment {
 public:
  virtual ~ProfilingEnvironment() = default;

  // Runs `iters` steps starting at global training step `start_iteration`.
  // Throws kEnvironmentRefused for configurations outside its domain.
  virtual std::vector<IterationSample> profile(const JobConfig& config,
                                               int iters,
                                               std::int64_t start_iteration) = 0;

  // Seconds to bring up `config` and restore the latest weights.
  virtual double restore_overhead_s(const JobConfig& config) const = 0;

  // Epochs needed to reach the training target on `config`, when known from
  // a prior run. Empty when the environment cannot supply it.
  virtual std::optional<double> epochs_to_target(const JobConfig& config) const {
    (void)config;
    return std::nullopt;
  }

  virtual std::int64_t dataset_size() const = 0;
  virtual const PricingModel& pricing() const = 0;
  virtual const VMShape& shape() const = 0;
};

}  // namespace costtune

#endif  // COSTTUNE_ENVIRONMENT_HPP_
