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

#include "costtune/search.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "costtune/error.hpp"
#include "costtune/model_store.hpp"

namespace costtune {
namespace {

class Driver {
 public:
  Driver(ProfilingEnvironment& env, const SearchParams& params,
         const PricingModel& pricing, const VMShape& shape)
      : env_(env), params_(params), pricing_(pricing), shape_(shape) {}

  // Runs `config` for a fixed number of steps.
  Exploration run(const JobConfig& config, ExplorationKind kind, int iters,
                  bool charge_restore) {
    Exploration e = begin(config, kind, charge_restore);
    const auto samples = env_.profile(config, iters, next_iteration_);
    double noise_sum = 0.0;
    int noise_count = 0;
    double tau_sum = 0.0;
    for (const auto& s : samples) {
      tau_sum += s.iteration_time_s();
      if (s.aggregated_sqnorm > 0.0) {
        noise_sum += compute_raw_noise(s) / s.workers();
        ++noise_count;
      }
    }
    e.iterations = static_cast<std::int64_t>(samples.size());
    e.mean_iteration_time_s = samples.empty() ? 0.0 : tau_sum / samples.size();
    e.normalized_noise = noise_count ? noise_sum / noise_count : 0.0;
    return finish(e);
  }

  // Runs `config` one step at a time until the smoothed noise settles.
  Exploration run_until_stable(const JobConfig& config, ExplorationKind kind,
                               bool charge_restore) {
    Exploration e = begin(config, kind, charge_restore);
    NoiseEstimate est;
    double tau_sum = 0.0;
    while (!est.stabilized) {
      if (e.iterations >= params_.max_stabilization_iters) {
        fail(ErrorCode::kSearchFailed,
             "gradient noise at " + to_string(config) +
                 " did not stabilize within " +
                 std::to_string(params_.max_stabilization_iters) + " steps");
      }
      const auto samples = env_.profile(config, 1, next_iteration_ + e.iterations);
      for (const auto& s : samples) {
        est = update(std::move(est), s, params_.ewma);
        tau_sum += s.iteration_time_s();
        ++e.iterations;
      }
    }
    e.mean_iteration_time_s = tau_sum / static_cast<double>(e.iterations);
    e.normalized_noise = est.normalized;
    e.stabilized = true;
    return finish(e);
  }

 private:
  Exploration begin(const JobConfig& config, ExplorationKind kind,
                    bool charge_restore) const {
    Exploration e;
    e.config = config;
    e.kind = kind;
    e.start_iteration = next_iteration_;
    e.restore_s = charge_restore ? env_.restore_overhead_s(config) : 0.0;
    return e;
  }

  Exploration finish(Exploration e) {
    next_iteration_ += e.iterations;
    e.cost_usd =
        e.time_s() / 3600.0 * hourly_cluster_price(pricing_, shape_, e.config.workers);
    return e;
  }

  ProfilingEnvironment& env_;
  const SearchParams& params_;
  const PricingModel& pricing_;
  const VMShape& shape_;
  std::int64_t next_iteration_ = 0;
};

bool refused(const Error& e) { return e.code() == ErrorCode::kEnvironmentRefused; }

double anchor_epochs(const ProfilingEnvironment& env, const JobConfig& config) {
  const auto e = env.epochs_to_target(config);
  if (!e) {
    fail(ErrorCode::kCapabilityMissing,
         "environment cannot report epochs to target for " + to_string(config) +
             "; searches need anchor epochs from a prior run. Use no-search "
             "(mode none) with a stored model instead");
  }
  return *e;
}

void account(SearchOutcome& out) {
  out.overhead_time_s = 0.0;
  out.overhead_cost_usd = 0.0;
  out.productive_iterations = out.warmup ? out.warmup->iterations : 0;
  for (const auto& e : out.explored) {
    out.overhead_time_s += e.time_s();
    out.overhead_cost_usd += e.cost_usd;
    out.productive_iterations += e.iterations;
  }
}

Constraints with_bounds(Constraints c, const SearchBounds& bounds) {
  if (!c.bounds) c.bounds = bounds;
  return c;
}

void choose(SearchOutcome& out, const Objective& objective,
            const Constraints& constraints) {
  if (out.tradeoff_points.empty()) {
    fail(ErrorCode::kSearchFailed, "no configuration could be evaluated");
  }
  out.recommendation = select(out.tradeoff_points, objective, constraints);
  if (out.recommendation.chosen) out.chosen = out.recommendation.chosen->config;
}

struct Extremes {
  int batch_lo, batch_hi, workers_lo, workers_hi;
};

// Extreme batch sizes of the grid, and the smallest and largest worker counts
// that divide both of them.
Extremes grid_extremes(const std::vector<JobConfig>& valid) {
  std::set<int> bs, ks;
  for (const auto& c : valid) {
    bs.insert(c.global_batch);
    ks.insert(c.workers);
  }
  if (bs.size() < 2 || ks.size() < 2) {
    fail(ErrorCode::kValidation,
         "partial search needs at least two distinct B and two distinct K");
  }
  Extremes x{*bs.begin(), *bs.rbegin(), 0, 0};
  std::vector<int> both;
  for (int k : ks) {
    if (is_valid({k, x.batch_lo}) && is_valid({k, x.batch_hi})) both.push_back(k);
  }
  if (both.size() < 2) {
    fail(ErrorCode::kSearchFailed,
         "need two worker counts dividing both B=" + std::to_string(x.batch_lo) +
             " and B=" + std::to_string(x.batch_hi));
  }
  x.workers_lo = both.front();
  x.workers_hi = both.back();
  return x;
}

struct AnchorFits {
  NoiseFit noise;
  EpochFit epochs;
};

AnchorFits run_anchors(Driver& driver, const ProfilingEnvironment& env,
                       const Extremes& x, std::vector<Exploration>& explored) {
  const JobConfig lo{x.workers_lo, x.batch_lo};
  const JobConfig hi{x.workers_lo, x.batch_hi};
  const double e_lo = anchor_epochs(env, lo);
  const double e_hi = anchor_epochs(env, hi);
  const Exploration a1 = driver.run_until_stable(lo, ExplorationKind::kAnchor, true);
  const Exploration a2 = driver.run_until_stable(hi, ExplorationKind::kAnchor, true);
  explored.push_back(a1);
  explored.push_back(a2);
  const NoisePoint np[] = {{lo.global_batch, a1.normalized_noise},
                           {hi.global_batch, a2.normalized_noise}};
  const EpochPoint ep[] = {{a1.normalized_noise, e_lo}, {a2.normalized_noise, e_hi}};
  return {fit_noise_vs_batch(np), fit_epochs_vs_noise(ep)};
}

// Noise vs B from per-config measurements: per-K fits averaged over K, else a
// pooled fit, else a flat line.
NoiseFit fit_measured_noise(const std::vector<Exploration>& explored) {
  std::map<int, std::vector<NoisePoint>> by_workers;
  std::vector<NoisePoint> pooled;
  for (const auto& e : explored) {
    const NoisePoint p{e.config.global_batch, e.normalized_noise};
    by_workers[e.config.workers].push_back(p);
    pooled.push_back(p);
  }
  std::vector<WorkerNoiseFit> per_k;
  for (const auto& [k, pts] : by_workers) {
    std::set<int> bs;
    for (const auto& p : pts) bs.insert(p.global_batch);
    if (bs.size() >= 2) per_k.push_back({k, fit_noise_vs_batch(pts)});
  }
  if (!per_k.empty()) return average_over_workers(per_k);
  std::set<int> bs;
  for (const auto& p : pooled) bs.insert(p.global_batch);
  if (bs.size() >= 2) return fit_noise_vs_batch(pooled);
  double mean = 0.0;
  for (const auto& p : pooled) mean += p.normalized_noise;
  return {0.0, mean / static_cast<double>(pooled.size())};
}

ParallelFit fit_measured_timing(const std::vector<Exploration>& explored) {
  std::vector<TimingPoint> pts;
  double mean = 0.0;
  for (const auto& e : explored) {
    pts.push_back({e.config.workers, mini_batch(e.config), e.mean_iteration_time_s});
    mean += e.mean_iteration_time_s;
  }
  try {
    return fit_iteration_time(pts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateFit) throw;
  }
  return {mean / static_cast<double>(pts.size()), 0.0, 0.0};
}

}  // namespace

std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::kFull: return "full";
    case SearchMode::kPartial: return "partial";
    case SearchMode::kNone: return "none";
  }
  return "partial";
}

std::string_view to_string(ExplorationKind kind) {
  switch (kind) {
    case ExplorationKind::kWarmup: return "warmup";
    case ExplorationKind::kAnchor: return "anchor";
    case ExplorationKind::kProfile: return "profile";
  }
  return "profile";
}

void validate(const SearchParams& params) {
  if (params.profile_iters < 1) {
    fail(ErrorCode::kValidation, "profile_iters must be >= 1");
  }
  if (params.sampling.kind == Sampling::Kind::kRandom &&
      (params.sampling.bspace < 2 || params.sampling.kspace < 2)) {
    fail(ErrorCode::kValidation, "random sampling needs bspace >= 2 and kspace >= 2");
  }
  if (params.max_stabilization_iters < 1) {
    fail(ErrorCode::kValidation, "max_stabilization_iters must be >= 1");
  }
  validate(params.ewma);
}

SearchOutcome full_search(ProfilingEnvironment& env, const SearchBounds& bounds,
                          const SearchParams& params, const Objective& objective,
                          const PricingModel& pricing, const VMShape& shape,
                          const Constraints& constraints) {
  validate(params);
  const auto candidates = enumerate_candidates(bounds).valid;
  if (candidates.empty()) {
    fail(ErrorCode::kSearchFailed, "search bounds contain no valid configuration");
  }
  SearchOutcome out;
  out.mode = SearchMode::kFull;
  Driver driver(env, params, pricing, shape);

  std::set<JobConfig> refused_configs;
  for (const auto& c : candidates) {
    try {
      out.warmup = driver.run_until_stable(c, ExplorationKind::kWarmup, false);
      break;
    } catch (const Error& e) {
      if (!refused(e)) throw;
      refused_configs.insert(c);
    }
  }
  if (!out.warmup) {
    fail(ErrorCode::kSearchFailed, "environment refused every configuration");
  }
  for (const auto& c : candidates) {
    if (refused_configs.count(c)) {
      out.skipped.push_back(c);
      continue;
    }
    try {
      out.explored.push_back(
          driver.run(c, ExplorationKind::kProfile, params.profile_iters, true));
    } catch (const Error& e) {
      if (!refused(e)) throw;
      out.skipped.push_back(c);
    }
  }
  if (out.explored.empty()) {
    fail(ErrorCode::kSearchFailed, "environment refused every configuration");
  }

  // Epoch anchors: extreme measured batch sizes, preferring a shared K.
  int b_lo = out.explored.front().config.global_batch;
  int b_hi = b_lo;
  for (const auto& e : out.explored) {
    b_lo = std::min(b_lo, e.config.global_batch);
    b_hi = std::max(b_hi, e.config.global_batch);
  }
  auto find = [&](int k, int b) -> const Exploration* {
    for (const auto& e : out.explored) {
      if (e.config.workers == k && e.config.global_batch == b) return &e;
    }
    return nullptr;
  };
  const Exploration* lo = nullptr;
  const Exploration* hi = nullptr;
  for (const auto& e : out.explored) {
    if (find(e.config.workers, b_lo) && find(e.config.workers, b_hi)) {
      lo = find(e.config.workers, b_lo);
      hi = find(e.config.workers, b_hi);
      break;
    }
  }
  if (!lo) {
    for (const auto& e : out.explored) {
      if (!lo && e.config.global_batch == b_lo) lo = &e;
      if (!hi && e.config.global_batch == b_hi) hi = &e;
    }
  }
  const double e_lo = anchor_epochs(env, lo->config);
  const double e_hi = anchor_epochs(env, hi->config);
  EpochFit epochs{e_lo, 0.0};
  if (lo->normalized_noise != hi->normalized_noise) {
    const EpochPoint ep[] = {{lo->normalized_noise, e_lo},
                             {hi->normalized_noise, e_hi}};
    epochs = fit_epochs_vs_noise(ep);
  } else if (lo != hi) {
    epochs.base_epochs = 0.5 * (e_lo + e_hi);
  }

  const NoiseFit noise = fit_measured_noise(out.explored);
  out.model.stat = {noise.slope, noise.intercept, epochs.base_epochs, epochs.slope};
  out.model.parallel = fit_measured_timing(out.explored);
  out.model.dataset_size = env.dataset_size();
  out.model.provenance = Provenance::kFullSearch;

  // Measured noise and step time feed the curve directly.
  for (const auto& e : out.explored) {
    const double ep = out.model.stat.epochs_at(e.normalized_noise);
    const double iters = ep * static_cast<double>(env.dataset_size()) /
                         static_cast<double>(e.config.global_batch);
    const double time = iters * e.mean_iteration_time_s;
    if (!(e.normalized_noise > 0.0) || !(ep > 0.0) || !(time > 0.0)) {
      out.skipped.push_back(e.config);
      continue;
    }
    const double cost =
        time / 3600.0 * hourly_cluster_price(pricing, shape, e.config.workers);
    out.tradeoff_points.push_back({e.config, time, cost});
  }
  account(out);
  choose(out, objective, with_bounds(constraints, bounds));
  return out;
}

SearchOutcome partial_search(ProfilingEnvironment& env, const SearchBounds& bounds,
                             const SearchParams& params, const Objective& objective,
                             const PricingModel& pricing, const VMShape& shape,
                             const Constraints& constraints) {
  validate(params);
  const auto candidates = enumerate_candidates(bounds).valid;
  const Extremes x = grid_extremes(candidates);
  SearchOutcome out;
  out.mode = SearchMode::kPartial;
  Driver driver(env, params, pricing, shape);

  const AnchorFits fits = run_anchors(driver, env, x, out.explored);

  const JobConfig corners[] = {{x.workers_lo, x.batch_lo},
                               {x.workers_lo, x.batch_hi},
                               {x.workers_hi, x.batch_lo},
                               {x.workers_hi, x.batch_hi}};
  std::vector<TimingPoint> timing;
  for (const auto& c : corners) {
    const Exploration e =
        driver.run(c, ExplorationKind::kProfile, params.profile_iters, true);
    timing.push_back({c.workers, mini_batch(c), e.mean_iteration_time_s});
    out.explored.push_back(e);
  }

  out.model.stat = {fits.noise.slope, fits.noise.intercept,
                    fits.epochs.base_epochs, fits.epochs.slope};
  out.model.parallel = fit_iteration_time(timing);
  out.model.dataset_size = env.dataset_size();
  out.model.provenance = Provenance::kPartialSearch;

  for (const auto& c : candidates) {
    try {
      const Prediction p = predict(out.model, c, pricing, shape);
      out.tradeoff_points.push_back({c, p.total_time_s, p.cost_usd});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOutOfDomain) throw;
      out.skipped.push_back(c);
    }
  }
  account(out);
  choose(out, objective, with_bounds(constraints, bounds));
  return out;
}

ScavengerResult scavenger_scaling(ProfilingEnvironment& env,
                                  const SearchBounds& bounds,
                                  const SearchParams& params,
                                  const PricingModel& pricing,
                                  const VMShape& shape) {
  validate(params);
  const Extremes x = grid_extremes(enumerate_candidates(bounds).valid);
  Driver driver(env, params, pricing, shape);
  ScavengerResult result;
  const AnchorFits fits = run_anchors(driver, env, x, result.explored);
  result.stat = {fits.noise.slope, fits.noise.intercept, fits.epochs.base_epochs,
                 fits.epochs.slope};

  std::vector<int> bs = batch_values(bounds);
  std::vector<int> ks = worker_values(bounds);
  if (params.sampling.kind == Sampling::Kind::kRandom) {
    std::mt19937_64 rng(params.sampling.seed);
    auto draw = [&rng](const std::vector<int>& pool, int count) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::set<int> chosen;
      for (int i = 0; i < count; ++i) chosen.insert(pool[pick(rng)]);
      return std::vector<int>(chosen.begin(), chosen.end());
    };
    bs = draw(bs, params.sampling.bspace);
    ks = draw(ks, params.sampling.kspace);
  }

  // A single sampled K makes each lone point its own knee.
  const std::size_t min_points = std::min<std::size_t>(2, ks.size());
  const double per_vm = hourly_cluster_price(pricing, shape, 1);
  const double dataset = static_cast<double>(env.dataset_size());
  for (int b : bs) {
    std::vector<TradeoffPoint> sweep;
    for (int k : ks) {
      const JobConfig c{k, b};
      if (!is_valid(c)) continue;
      const double noise = result.stat.noise_at(b);
      const double epochs = result.stat.epochs_at(noise);
      if (!(noise > 0.0) || !(epochs > 0.0)) continue;
      Exploration e;
      try {
        e = driver.run(c, ExplorationKind::kProfile, params.profile_iters, true);
      } catch (const Error& err) {
        if (!refused(err)) throw;
        continue;
      }
      result.explored.push_back(e);
      const double iterations = dataset * epochs / b;
      const double est_time = e.mean_iteration_time_s * iterations;
      const double cost = k * (est_time / 3600.0) * per_vm;
      sweep.push_back({c, est_time, cost});
    }
    if (sweep.empty() || sweep.size() < min_points) continue;
    result.evaluated.insert(result.evaluated.end(), sweep.begin(), sweep.end());
    result.knees.push_back(kneedle_knee(TradeoffCurve::build(sweep, b)));
  }
  if (result.knees.empty()) {
    fail(ErrorCode::kSearchFailed, "no sampled batch size had enough valid workers");
  }
  std::vector<TradeoffPoint> knee_points;
  for (const auto& k : result.knees) knee_points.push_back(k.point);
  result.chosen = min_cost_time(knee_points).config;
  for (const auto& e : result.explored) {
    result.overhead_time_s += e.time_s();
    result.overhead_cost_usd += e.cost_usd;
  }
  return result;
}

PerfModel no_search(const ModelStore& store, const std::string& fingerprint,
                    bool allow_universal, std::int64_t dataset_size) {
  if (store.contains(fingerprint)) {
    PerfModel m = store.load(fingerprint).model;
    m.provenance = Provenance::kReused;
    return m;
  }
  if (allow_universal) return store.universal_average(dataset_size);
  fail(ErrorCode::kNotFound, "no stored model for fingerprint '" + fingerprint +
                                 "' and the universal model is disabled");
}

}  // namespace costtune
