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

#include "costtune/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "costtune/error.hpp"

namespace costtune {
namespace {

struct Preset {
  std::string_view name;
  SimWorkload workload;
  double restore_s;
  SearchBounds bounds;
};

SimWorkload make_workload(std::string_view name, std::int64_t d, double a_n,
                          double c_n, double e_star, double theta, double c0,
                          double c_b, double c_k, double ramp) {
  SimWorkload w;
  w.name = std::string(name);
  w.dataset_size = d;
  w.noise = {a_n, c_n};
  w.epochs = {e_star, theta};
  w.parallel = {c0, c_b, c_k};
  w.ramp_iters = ramp;
  return w;
}

const std::vector<Preset>& presets() {
  // Ramp scales put the default-EWMA stabilization point near 2000 and 3000
  // steps. The window test cannot fire much later than ~9000 steps for any
  // exponential ramp, so the transformer ramp is simply very slow (~8200).
  static const std::vector<Preset> kPresets = {
      {"resnet18-like",
       make_workload("resnet18-like", 100000, 48.0, 0.1, 80.0, 70.0, 0.4, 0.01,
                     0.03, 640.0),
       37.0,
       {8, 20, 4, 384, 1024, {384, 512, 768, 1024}}},
      {"resnet50-like",
       make_workload("resnet50-like", 50000, 52.0, 0.15, 70.0, 65.0, 0.6,
                     0.018, 0.035, 1300.0),
       40.0,
       {8, 20, 4, 384, 1024, {384, 512, 768, 1024}}},
      {"transformer-like",
       make_workload("transformer-like", 400000, 40.0, 0.2, 12.0, 9.0, 0.5,
                     0.012, 0.045, 20000.0),
       127.0,
       {8, 20, 4, 512, 1280, {512, 768, 1024, 1280}}},
  };
  return kPresets;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  fail(ErrorCode::kNotFound, "unknown workload preset '" + std::string(name) +
                                 "' (known: resnet18-like, resnet50-like, "
                                 "transformer-like)");
}

double jittered(double value, double sigma, std::normal_distribution<double>& z,
                std::mt19937_64& rng) {
  const double draw = z(rng);
  return value * std::max(0.0, 1.0 + sigma * draw);
}

}  // namespace

double SimWorkload::noise_at(int global_batch) const {
  return noise.slope / std::sqrt(static_cast<double>(global_batch)) +
         noise.intercept;
}

void validate(const SimWorkload& w) {
  if (w.dataset_size < 1) fail(ErrorCode::kValidation, "dataset_size must be >= 1");
  if (!(w.ramp_iters >= 1.0)) fail(ErrorCode::kValidation, "ramp_iters must be >= 1");
  if (!(w.jitter >= 0.0)) fail(ErrorCode::kValidation, "jitter must be >= 0");
  if (w.gradient_dim < 1) fail(ErrorCode::kValidation, "gradient_dim must be >= 1");
}

double SimCluster::restore_for(const JobConfig& config) const {
  if (auto it = restore_overrides.find(config); it != restore_overrides.end()) {
    return it->second;
  }
  return restore_overhead_s;
}

void validate(const SimCluster& c) {
  validate(c.shape);
  validate(c.pricing);
  if (!(c.restore_overhead_s >= 0.0)) {
    fail(ErrorCode::kValidation, "restore_overhead_s must be >= 0");
  }
  for (const auto& [cfg, v] : c.restore_overrides) {
    if (!(v >= 0.0)) fail(ErrorCode::kValidation, "restore overrides must be >= 0");
  }
}

Prediction ground_truth(const SimWorkload& workload, const SimCluster& cluster,
                        const JobConfig& config) {
  validate(config);
  const double batch = static_cast<double>(config.global_batch);
  const double b = static_cast<double>(config.global_batch / config.workers);
  Prediction p;
  p.normalized_noise =
      workload.noise.slope / std::sqrt(batch) + workload.noise.intercept;
  p.epochs = workload.epochs.base_epochs +
             workload.epochs.slope * p.normalized_noise;
  p.iterations = p.epochs * static_cast<double>(workload.dataset_size) / batch;
  p.iteration_time_s = workload.parallel.base_s +
                       workload.parallel.per_sample_s * b +
                       workload.parallel.per_worker_s * config.workers;
  p.total_time_s = p.iterations * p.iteration_time_s;
  p.cost_usd = p.total_time_s / 3600.0 *
               hourly_cluster_price(cluster.pricing, cluster.shape,
                                    config.workers);
  return p;
}

double epochs_to_target(const SimWorkload& workload, const JobConfig& config) {
  validate(config);
  return workload.epochs.base_epochs +
         workload.epochs.slope * workload.noise_at(config.global_batch);
}

RunTotals run_to_target(const SimWorkload& workload, const SimCluster& cluster,
                        const JobConfig& config) {
  const Prediction p = ground_truth(workload, cluster, config);
  return {p.total_time_s, p.cost_usd};
}

Simulator::Simulator(SimWorkload workload, SimCluster cluster)
    : workload_(std::move(workload)),
      cluster_(std::move(cluster)),
      rng_(workload_.seed) {
  validate(workload_);
  validate(cluster_);
}

bool Simulator::accepts(const JobConfig& config) const {
  if (!is_valid(config)) return false;
  if (cluster_.per_sample_gb) {
    if (cluster_.shape.memory_gb <= cluster_.fixed_overhead_gb) return false;
    const int limit = max_batch_for_memory(cluster_.shape, *cluster_.per_sample_gb,
                                           cluster_.fixed_overhead_gb,
                                           config.workers);
    if (config.global_batch > limit) return false;
  }
  const Prediction p = ground_truth(workload_, cluster_, config);
  return p.normalized_noise > 0.0 && p.epochs > 0.0 && p.iteration_time_s > 0.0;
}

std::vector<IterationSample> Simulator::profile(const JobConfig& config,
                                                int iters,
                                                std::int64_t start_iteration) {
  validate(config);
  if (!accepts(config)) {
    fail(ErrorCode::kEnvironmentRefused,
         "simulator refuses " + to_string(config) + " (outside its domain)");
  }
  if (iters < 0) fail(ErrorCode::kValidation, "iteration count must be >= 0");

  const int k = config.workers;
  const int b = config.global_batch / k;
  const double target = k * workload_.noise_at(config.global_batch);
  const double compute_base =
      workload_.parallel.base_s / 2.0 + workload_.parallel.per_sample_s * b;
  const double sync_base =
      workload_.parallel.base_s / 2.0 + workload_.parallel.per_worker_s * k;
  std::normal_distribution<double> z(0.0, 1.0);

  std::vector<IterationSample> out;
  out.reserve(static_cast<std::size_t>(iters));
  for (int i = 0; i < iters; ++i) {
    const std::int64_t t = start_iteration + i;
    const double ramp =
        1.0 - std::exp(-static_cast<double>(t) / workload_.ramp_iters);
    IterationSample s;
    s.iteration = t;
    const double noise = jittered(target * ramp, workload_.jitter, z, rng_);
    s.worker_sqnorms.assign(static_cast<std::size_t>(k), noise);
    s.aggregated_sqnorm = 1.0;
    s.compute_time_s = jittered(compute_base, workload_.jitter, z, rng_);
    s.sync_time_s = jittered(sync_base, workload_.jitter, z, rng_);
    out.push_back(std::move(s));
  }
  return out;
}

double Simulator::restore_overhead_s(const JobConfig& config) const {
  return cluster_.restore_for(config);
}

std::optional<double> Simulator::epochs_to_target(const JobConfig& config) const {
  return costtune::epochs_to_target(workload_, config);
}

IterationSample iid_gradient_sample(int workers, int dim, std::mt19937_64& rng,
                                    std::int64_t iteration) {
  if (workers < 1 || dim < 1) {
    fail(ErrorCode::kValidation, "workers and dimension must be >= 1");
  }
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> aggregate(static_cast<std::size_t>(dim), 0.0);
  IterationSample s;
  s.iteration = iteration;
  s.worker_sqnorms.reserve(static_cast<std::size_t>(workers));
  for (int k = 0; k < workers; ++k) {
    double sq = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double g = z(rng);
      sq += g * g;
      aggregate[static_cast<std::size_t>(j)] += g;
    }
    s.worker_sqnorms.push_back(sq);
  }
  double agg = 0.0;
  for (double v : aggregate) {
    const double mean = v / workers;
    agg += mean * mean;
  }
  s.aggregated_sqnorm = agg;
  return s;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.emplace_back(p.name);
  return names;
}

SimWorkload preset_workload(std::string_view name) {
  return find_preset(name).workload;
}

double preset_restore_overhead_s(std::string_view name) {
  return find_preset(name).restore_s;
}

SearchBounds preset_bounds(std::string_view name) {
  return find_preset(name).bounds;
}

}  // namespace costtune
