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

#include "costtune/perf_model.hpp"

#include <cmath>
#include <set>

#include "costtune/error.hpp"

namespace costtune {
namespace {

struct Line {
  double slope;
  double intercept;
};

// Closed-form simple linear regression on centered sums.
Line least_squares_line(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

double StatFit::noise_at(int global_batch) const {
  return noise_slope / std::sqrt(static_cast<double>(global_batch)) +
         noise_intercept;
}

double StatFit::epochs_at(double normalized_noise) const {
  return epochs_base + epochs_slope * normalized_noise;
}

std::vector<std::string> StatFit::flags() const {
  std::vector<std::string> out;
  if (epochs_slope < 0.0) {
    out.emplace_back("theta < 0: epochs decrease with noise");
  }
  if (noise_slope < 0.0) {
    out.emplace_back("a_n < 0: noise grows with batch size");
  }
  if (epochs_base < 0.0) out.emplace_back("e* < 0: negative minimal epochs");
  return out;
}

double ParallelFit::iteration_time(int workers, double mini_batch) const {
  return base_s + per_sample_s * mini_batch + per_worker_s * workers;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kFullSearch: return "full_search";
    case Provenance::kPartialSearch: return "partial_search";
    case Provenance::kReused: return "reused";
    case Provenance::kUniversal: return "universal";
  }
  return "full_search";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "full_search") return Provenance::kFullSearch;
  if (s == "partial_search") return Provenance::kPartialSearch;
  if (s == "reused") return Provenance::kReused;
  if (s == "universal") return Provenance::kUniversal;
  fail(ErrorCode::kValidation, "unknown provenance '" + std::string(s) + "'");
}

NoiseFit fit_noise_vs_batch(std::span<const NoisePoint> points) {
  std::set<int> distinct;
  for (const auto& p : points) {
    if (p.global_batch < 1) {
      fail(ErrorCode::kValidation, "batch sizes must be >= 1");
    }
    distinct.insert(p.global_batch);
  }
  if (distinct.size() < 2) {
    fail(ErrorCode::kDegenerateFit,
         "noise fit needs at least two distinct global batch sizes B");
  }
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(1.0 / std::sqrt(static_cast<double>(p.global_batch)));
    ys.push_back(p.normalized_noise);
  }
  const Line l = least_squares_line(xs, ys);
  return {l.slope, l.intercept};
}

EpochFit fit_epochs_vs_noise(std::span<const EpochPoint> points) {
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.normalized_noise);
  if (distinct.size() < 2) {
    fail(ErrorCode::kDegenerateFit,
         "epoch fit needs at least two distinct normalized noise values");
  }
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(p.normalized_noise);
    ys.push_back(p.epochs);
  }
  const Line l = least_squares_line(xs, ys);
  return {l.intercept, l.slope};
}

ParallelFit fit_iteration_time(std::span<const TimingPoint> points) {
  if (points.size() < 3) {
    fail(ErrorCode::kDegenerateFit,
         "iteration-time fit needs at least 3 (K, b) points, got " +
             std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double mb = 0.0, mk = 0.0, mt = 0.0;
  for (const auto& p : points) {
    mb += p.mini_batch;
    mk += p.workers;
    mt += p.iteration_time_s;
  }
  mb /= n;
  mk /= n;
  mt /= n;
  double sbb = 0.0, skk = 0.0, sbk = 0.0, sbt = 0.0, skt = 0.0;
  for (const auto& p : points) {
    const double db = p.mini_batch - mb;
    const double dk = p.workers - mk;
    const double dt = p.iteration_time_s - mt;
    sbb += db * db;
    skk += dk * dk;
    sbk += db * dk;
    sbt += db * dt;
    skt += dk * dt;
  }
  if (sbb == 0.0) {
    fail(ErrorCode::kDegenerateFit,
         "iteration-time fit: mini-batch b has no variation");
  }
  if (skk == 0.0) {
    fail(ErrorCode::kDegenerateFit,
         "iteration-time fit: worker count K has no variation");
  }
  const double det = sbb * skk - sbk * sbk;
  if (det <= 1e-12 * sbb * skk) {
    fail(ErrorCode::kDegenerateFit,
         "iteration-time fit: b and K are collinear, no independent variation");
  }
  ParallelFit fit;
  fit.per_sample_s = (sbt * skk - skt * sbk) / det;
  fit.per_worker_s = (skt * sbb - sbt * sbk) / det;
  fit.base_s = mt - fit.per_sample_s * mb - fit.per_worker_s * mk;
  return fit;
}

NoiseFit average_over_workers(std::span<const WorkerNoiseFit> fits) {
  if (fits.empty()) {
    fail(ErrorCode::kDegenerateFit, "no per-worker noise fits to average");
  }
  NoiseFit avg;
  for (const auto& f : fits) {
    avg.slope += f.fit.slope;
    avg.intercept += f.fit.intercept;
  }
  avg.slope /= static_cast<double>(fits.size());
  avg.intercept /= static_cast<double>(fits.size());
  return avg;
}

void validate(const PerfModel& model) {
  if (model.dataset_size < 1) {
    fail(ErrorCode::kValidation, "dataset size must be >= 1");
  }
  const double coeffs[] = {model.stat.noise_slope,   model.stat.noise_intercept,
                           model.stat.epochs_base,   model.stat.epochs_slope,
                           model.parallel.base_s,    model.parallel.per_sample_s,
                           model.parallel.per_worker_s};
  for (double c : coeffs) {
    if (!std::isfinite(c)) {
      fail(ErrorCode::kValidation, "model coefficients must be finite");
    }
  }
}

Prediction predict(const PerfModel& model, const JobConfig& config,
                   const PricingModel& pricing, const VMShape& shape) {
  const int b = mini_batch(config);
  Prediction p;
  p.normalized_noise = model.stat.noise_at(config.global_batch);
  if (!(p.normalized_noise > 0.0)) {
    fail(ErrorCode::kOutOfDomain,
         "predicted noise " + std::to_string(p.normalized_noise) + " at " +
             to_string(config) + " is not positive");
  }
  p.epochs = model.stat.epochs_at(p.normalized_noise);
  if (!(p.epochs > 0.0)) {
    fail(ErrorCode::kOutOfDomain, "predicted epochs at " + to_string(config) +
                                      " are not positive");
  }
  p.iterations = p.epochs * static_cast<double>(model.dataset_size) /
                 static_cast<double>(config.global_batch);
  p.iteration_time_s = model.parallel.iteration_time(config.workers, b);
  if (!(p.iteration_time_s > 0.0)) {
    fail(ErrorCode::kOutOfDomain, "predicted iteration time at " +
                                      to_string(config) + " is not positive");
  }
  p.total_time_s = p.iterations * p.iteration_time_s;
  p.cost_usd = p.total_time_s / 3600.0 *
               hourly_cluster_price(pricing, shape, config.workers);
  return p;
}

}  // namespace costtune
