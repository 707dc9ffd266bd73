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

#ifndef COSTTUNE_CONFIG_HPP_
#define COSTTUNE_CONFIG_HPP_

#include <compare>
#include <string>
#include <vector>

namespace costtune {

/// A candidate cluster configuration: `workers` VMs sharing a global batch of
/// `global_batch` samples per iteration. The per-worker mini-batch is
/// global_batch / workers and must be an integer.
struct JobConfig {
  int workers = 1;
  int global_batch = 1;

  friend auto operator<=>(const JobConfig&, const JobConfig&) = default;
};

bool is_valid(const JobConfig& config) noexcept;

// Throws kConfigInvalid naming the violated invariant.
void validate(const JobConfig& config);

// B / K. Non-divisible configurations are rejected, never rounded.
int mini_batch(const JobConfig& config);

std::string to_string(const JobConfig& config);

struct VMShape {
  int vcpus = 4;
  double memory_gb = 16.0;
};

void validate(const VMShape& shape);

enum class PricingMode { kFlatPerVm, kPerResource };

/// Hourly VM rental rates. Flat mode charges `flat_hourly_usd` per worker and
/// ignores the per-resource rates; per-resource mode does the opposite.
struct PricingModel {
  PricingMode mode = PricingMode::kFlatPerVm;
  double flat_hourly_usd = 0.0;
  double per_vcpu_hourly_usd = 0.0;
  double per_gb_hourly_usd = 0.0;

  static PricingModel flat(double hourly_usd);
  static PricingModel per_resource(double per_vcpu_usd, double per_gb_usd);
};

void validate(const PricingModel& pricing);

// $/hr for a cluster of `workers` VMs of the given shape. Parameter servers are
// not billed.
double hourly_cluster_price(const PricingModel& pricing, const VMShape& shape,
                            int workers);

// Largest global batch whose per-worker share fits in VM memory, clamped so
// every worker gets at least one sample.
int max_batch_for_memory(const VMShape& shape, double per_sample_gb,
                         double fixed_overhead_gb, int workers);

/// User-supplied search region. When `batch_candidates` is non-empty it
/// replaces the [batch_min, batch_max] range; otherwise the batch grid is
/// batch_min doubled until batch_max, with batch_max always included.
struct SearchBounds {
  int workers_min = 1;
  int workers_max = 1;
  int workers_step = 1;
  int batch_min = 1;
  int batch_max = 1;
  std::vector<int> batch_candidates;
};

void validate(const SearchBounds& bounds);

std::vector<int> worker_values(const SearchBounds& bounds);
std::vector<int> batch_values(const SearchBounds& bounds);

bool contains(const SearchBounds& bounds, const JobConfig& config) noexcept;

struct CandidateSet {
  std::vector<JobConfig> valid;     // sorted by (K, B)
  std::vector<JobConfig> rejected;  // grid pairs violating B mod K = 0
};

CandidateSet enumerate_candidates(const SearchBounds& bounds);

}  // namespace costtune

#endif  // COSTTUNE_CONFIG_HPP_
