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

#ifndef COSTTUNE_SIMULATOR_HPP_
#define COSTTUNE_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "costtune/config.hpp"
#include "costtune/environment.hpp"
#include "costtune/perf_model.hpp"

namespace costtune {

/// Ground truth for a synthetic training job. The declared coefficients are
/// the generative model; traces, epochs and timings are derived from them.
struct SimWorkload {
  std::string name = "custom";
  std::int64_t dataset_size = 50000;
  NoiseFit noise;        // normalized noise vs 1/sqrt(B)
  EpochFit epochs;       // epochs vs normalized noise
  ParallelFit parallel;  // step time vs (b, K)
  double ramp_iters = 500.0;  // R in 1 - exp(-t / R)
  double jitter = 0.0;        // relative std-dev of measurement noise
  int gradient_dim = 10000;
  std::uint64_t seed = 0;

  double noise_at(int global_batch) const;
};

void validate(const SimWorkload& workload);

struct SimCluster {
  VMShape shape;
  PricingModel pricing = PricingModel::flat(0.13402);
  double restore_overhead_s = 0.0;
  std::map<JobConfig, double> restore_overrides;
  // Optional memory model; when set, batches above the per-K memory limit are
  // refused.
  std::optional<double> per_sample_gb;
  double fixed_overhead_gb = 0.0;

  double restore_for(const JobConfig& config) const;
};

void validate(const SimCluster& cluster);

// Exact closed-form evaluation of the generative model, without jitter or
// ramp. Evaluated in the same operation order as predict().
Prediction ground_truth(const SimWorkload& workload, const SimCluster& cluster,
                        const JobConfig& config);

// e* + theta * noise(B); independent of K.
double epochs_to_target(const SimWorkload& workload, const JobConfig& config);

struct RunTotals {
  double time_s = 0.0;
  double cost_usd = 0.0;
};

// Training to the target on one configuration from the start.
RunTotals run_to_target(const SimWorkload& workload, const SimCluster& cluster,
                        const JobConfig& config);

class Simulator final : public ProfilingEnvironment {
 public:
  Simulator(SimWorkload workload, SimCluster cluster);

  std::vector<IterationSample> profile(const JobConfig& config, int iters,
                                       std::int64_t start_iteration) override;
  double restore_overhead_s(const JobConfig& config) const override;
  std::optional<double> epochs_to_target(const JobConfig& config) const override;
  std::int64_t dataset_size() const override { return workload_.dataset_size; }
  const PricingModel& pricing() const override { return cluster_.pricing; }
  const VMShape& shape() const override { return cluster_.shape; }

  const SimWorkload& workload() const noexcept { return workload_; }
  const SimCluster& cluster() const noexcept { return cluster_; }

  bool accepts(const JobConfig& config) const;

 private:
  SimWorkload workload_;
  SimCluster cluster_;
  std::mt19937_64 rng_;
};

// A step whose K worker gradients are i.i.d. standard normal vectors of
// dimension `dim` with no shared signal; the aggregate is their mean.
IterationSample iid_gradient_sample(int workers, int dim, std::mt19937_64& rng,
                                    std::int64_t iteration = 0);

// resnet18-like, resnet50-like, transformer-like.
std::vector<std::string> preset_names();
SimWorkload preset_workload(std::string_view name);
// Restore overhead per reconfiguration for a preset: 37, 40 and 127 s.
double preset_restore_overhead_s(std::string_view name);
SearchBounds preset_bounds(std::string_view name);

}  // namespace costtune

#endif  // COSTTUNE_SIMULATOR_HPP_
