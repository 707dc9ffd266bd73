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

#ifndef COSTTUNE_PERF_MODEL_HPP_
#define COSTTUNE_PERF_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "costtune/config.hpp"

namespace costtune {

// Normalized noise as an affine function of 1/sqrt(B).
struct NoiseFit {
  double slope = 0.0;      // a_n
  double intercept = 0.0;  // c_n
};

// Epochs to target as an affine function of normalized noise.
struct EpochFit {
  double base_epochs = 0.0;  // e*, the noise-free minimum
  double slope = 0.0;        // theta
};

/// Statistical half of the performance model.
struct StatFit {
  double noise_slope = 0.0;
  double noise_intercept = 0.0;
  double epochs_base = 0.0;
  double epochs_slope = 0.0;

  double noise_at(int global_batch) const;
  double epochs_at(double normalized_noise) const;

  // Warnings for coefficients that contradict the expected monotonicity:
  // negative theta, negative a_n, negative e*. Not errors.
  std::vector<std::string> flags() const;
};

/// Per-iteration time tau = base + per_sample * b + per_worker * K.
struct ParallelFit {
  double base_s = 0.0;
  double per_sample_s = 0.0;
  double per_worker_s = 0.0;

  double iteration_time(int workers, double mini_batch) const;
};

enum class Provenance { kFullSearch, kPartialSearch, kReused, kUniversal };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct PerfModel {
  StatFit stat;
  ParallelFit parallel;
  std::int64_t dataset_size = 1;
  std::string fingerprint;
  Provenance provenance = Provenance::kFullSearch;
};

struct Prediction {
  double normalized_noise = 0.0;
  double epochs = 0.0;
  double iterations = 0.0;
  double iteration_time_s = 0.0;
  double total_time_s = 0.0;
  double cost_usd = 0.0;
};

struct NoisePoint {
  int global_batch;
  double normalized_noise;
};

struct EpochPoint {
  double normalized_noise;
  double epochs;
};

struct TimingPoint {
  int workers;
  int mini_batch;
  double iteration_time_s;
};

struct WorkerNoiseFit {
  int workers;
  NoiseFit fit;
};

// Least squares of noise against 1/sqrt(B). Needs two distinct batch sizes.
NoiseFit fit_noise_vs_batch(std::span<const NoisePoint> points);

// Least squares of epochs against noise. Needs two distinct noise values.
EpochFit fit_epochs_vs_noise(std::span<const EpochPoint> points);

// Least-squares plane over (b, K). Throws kDegenerateFit naming the axis that
// lacks variation, or reporting that b and K move together.
ParallelFit fit_iteration_time(std::span<const TimingPoint> points);

// Unweighted mean of per-K noise fits.
NoiseFit average_over_workers(std::span<const WorkerNoiseFit> fits);

// Chains noise -> epochs -> iterations -> time -> cost. Throws kOutOfDomain
// when the model yields a non-positive noise, epoch count or step time.
Prediction predict(const PerfModel& model, const JobConfig& config,
                   const PricingModel& pricing, const VMShape& shape);

void validate(const PerfModel& model);

}  // namespace costtune

#endif  // COSTTUNE_PERF_MODEL_HPP_
