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

#include "costtune/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "costtune/error.hpp"

namespace costtune {

bool is_valid(const JobConfig& config) noexcept {
  return config.workers >= 1 && config.global_batch >= 1 &&
         config.global_batch % config.workers == 0;
}

void validate(const JobConfig& config) {
  if (config.workers < 1) {
    fail(ErrorCode::kConfigInvalid,
         "workers must be >= 1, got " + std::to_string(config.workers));
  }
  if (config.global_batch < 1) {
    fail(ErrorCode::kConfigInvalid, "global batch must be >= 1, got " +
                                        std::to_string(config.global_batch));
  }
  if (config.global_batch % config.workers != 0) {
    fail(ErrorCode::kConfigInvalid,
         "global batch " + std::to_string(config.global_batch) +
             " is not divisible by " + std::to_string(config.workers) +
             " workers");
  }
}

int mini_batch(const JobConfig& config) {
  validate(config);
  return config.global_batch / config.workers;
}

std::string to_string(const JobConfig& config) {
  return "(K=" + std::to_string(config.workers) +
         ", B=" + std::to_string(config.global_batch) + ")";
}

void validate(const VMShape& shape) {
  if (shape.vcpus < 1) fail(ErrorCode::kValidation, "vcpus must be >= 1");
  if (!(shape.memory_gb > 0.0)) {
    fail(ErrorCode::kValidation, "memory_gb must be > 0");
  }
}

PricingModel PricingModel::flat(double hourly_usd) {
  PricingModel p;
  p.mode = PricingMode::kFlatPerVm;
  p.flat_hourly_usd = hourly_usd;
  return p;
}

PricingModel PricingModel::per_resource(double per_vcpu_usd,
                                        double per_gb_usd) {
  PricingModel p;
  p.mode = PricingMode::kPerResource;
  p.per_vcpu_hourly_usd = per_vcpu_usd;
  p.per_gb_hourly_usd = per_gb_usd;
  return p;
}

void validate(const PricingModel& pricing) {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::kValidation,
           std::string(name) + " must be a finite non-negative rate");
    }
  };
  check(pricing.flat_hourly_usd, "flat_hourly_usd");
  check(pricing.per_vcpu_hourly_usd, "per_vcpu_hourly_usd");
  check(pricing.per_gb_hourly_usd, "per_gb_hourly_usd");
}

double hourly_cluster_price(const PricingModel& pricing, const VMShape& shape,
                            int workers) {
  switch (pricing.mode) {
    case PricingMode::kFlatPerVm:
      return workers * pricing.flat_hourly_usd;
    case PricingMode::kPerResource:
      return workers * (shape.vcpus * pricing.per_vcpu_hourly_usd +
                        shape.memory_gb * pricing.per_gb_hourly_usd);
  }
  return 0.0;
}

int max_batch_for_memory(const VMShape& shape, double per_sample_gb,
                         double fixed_overhead_gb, int workers) {
  if (!(per_sample_gb > 0.0)) {
    fail(ErrorCode::kValidation, "per-sample memory must be > 0");
  }
  if (workers < 1) fail(ErrorCode::kConfigInvalid, "workers must be >= 1");
  if (shape.memory_gb <= fixed_overhead_gb) {
    fail(ErrorCode::kInfeasibleMemory,
         "fixed overhead of " + std::to_string(fixed_overhead_gb) +
             " GB leaves no room on a " + std::to_string(shape.memory_gb) +
             " GB VM");
  }
  const double per_worker =
      std::floor((shape.memory_gb - fixed_overhead_gb) / per_sample_gb);
  return workers * static_cast<int>(std::max(per_worker, 1.0));
}

void validate(const SearchBounds& bounds) {
  if (bounds.workers_min < 1) {
    fail(ErrorCode::kValidation, "K_min must be >= 1");
  }
  if (bounds.workers_max < bounds.workers_min) {
    fail(ErrorCode::kValidation, "K_min must not exceed K_max");
  }
  if (bounds.workers_step < 1) {
    fail(ErrorCode::kValidation, "K_step must be >= 1");
  }
  if (bounds.batch_candidates.empty()) {
    if (bounds.batch_min < 1) {
      fail(ErrorCode::kValidation, "B_min must be >= 1");
    }
    if (bounds.batch_max < bounds.batch_min) {
      fail(ErrorCode::kValidation, "B_min must not exceed B_max");
    }
  } else {
    for (int b : bounds.batch_candidates) {
      if (b < 1) fail(ErrorCode::kValidation, "batch candidates must be >= 1");
    }
  }
}

std::vector<int> worker_values(const SearchBounds& bounds) {
  std::vector<int> ks;
  for (int k = bounds.workers_min; k <= bounds.workers_max;
       k += bounds.workers_step) {
    ks.push_back(k);
  }
  return ks;
}

std::vector<int> batch_values(const SearchBounds& bounds) {
  std::set<int> bs;
  if (!bounds.batch_candidates.empty()) {
    bs.insert(bounds.batch_candidates.begin(), bounds.batch_candidates.end());
  } else {
    for (long b = bounds.batch_min; b < bounds.batch_max; b *= 2) {
      bs.insert(static_cast<int>(b));
    }
    bs.insert(bounds.batch_max);
  }
  return {bs.begin(), bs.end()};
}

bool contains(const SearchBounds& bounds, const JobConfig& config) noexcept {
  const auto ks = worker_values(bounds);
  const auto bs = batch_values(bounds);
  return std::binary_search(ks.begin(), ks.end(), config.workers) &&
         std::binary_search(bs.begin(), bs.end(), config.global_batch);
}

CandidateSet enumerate_candidates(const SearchBounds& bounds) {
  validate(bounds);
  CandidateSet set;
  for (int k : worker_values(bounds)) {
    for (int b : batch_values(bounds)) {
      const JobConfig c{k, b};
      (is_valid(c) ? set.valid : set.rejected).push_back(c);
    }
  }
  return set;
}

}  // namespace costtune
