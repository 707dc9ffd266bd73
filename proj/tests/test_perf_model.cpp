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

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "costtune/error.hpp"
#include "costtune/perf_model.hpp"
#include "costtune/tradeoff.hpp"
#include "test_util.hpp"

using namespace costtune;

namespace {

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateFit);
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

}  // namespace

TEST_SUITE("perf_model") {

TEST_CASE("noise fit against 1/sqrt(B)") {
  const NoisePoint pts[] = {{256, 3.0}, {1024, 1.5}};
  const NoiseFit f = fit_noise_vs_batch(pts);
  CHECK(f.slope == doctest::Approx(48.0).epsilon(1e-12));
  CHECK(std::fabs(f.intercept) < 1e-12);
  const StatFit stat{f.slope, f.intercept, 0, 0};
  CHECK(stat.noise_at(576) == doctest::Approx(2.0).epsilon(1e-12));

  const NoisePoint flat[] = {{128, 0.7}, {2048, 0.7}};
  const NoiseFit g = fit_noise_vs_batch(flat);
  CHECK(std::fabs(g.slope) < 1e-12);
  CHECK(g.intercept == doctest::Approx(0.7).epsilon(1e-12));

  const NoisePoint same[] = {{512, 1.0}, {512, 2.0}};
  CHECK(message_of([&] { fit_noise_vs_batch(same); }).find("B") != std::string::npos);
}

TEST_CASE("epoch fit against noise") {
  const EpochPoint pts[] = {{2.0, 110.0}, {4.0, 210.0}};
  const EpochFit f = fit_epochs_vs_noise(pts);
  CHECK(f.base_epochs == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(f.slope == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(StatFit{0, 0, f.base_epochs, f.slope}.epochs_at(3.0) ==
        doctest::Approx(160.0).epsilon(1e-12));

  const EpochPoint flat[] = {{1.0, 42.0}, {3.0, 42.0}};
  const EpochFit g = fit_epochs_vs_noise(flat);
  CHECK(g.slope == 0.0);
  CHECK(g.base_epochs == 42.0);

  const EpochPoint same[] = {{2.0, 1.0}, {2.0, 5.0}};
  message_of([&] { fit_epochs_vs_noise(same); });
}

TEST_CASE("iteration-time plane") {
  const ParallelFit truth{0.2, 0.001, 0.05};
  std::vector<TimingPoint> pts;
  for (auto [k, b] : {std::pair{8, 64}, {8, 128}, {16, 64}}) {
    pts.push_back({k, b, truth.iteration_time(k, b)});
  }
  const ParallelFit f = fit_iteration_time(pts);
  CHECK(std::fabs(f.base_s - 0.2) < 1e-12);
  CHECK(std::fabs(f.per_sample_s - 0.001) < 1e-12);
  CHECK(std::fabs(f.per_worker_s - 0.05) < 1e-12);

  SUBCASE("flat plane") {
    const TimingPoint flat[] = {{8, 64, 0.9}, {8, 128, 0.9}, {16, 64, 0.9}, {12, 32, 0.9}};
    const ParallelFit g = fit_iteration_time(flat);
    CHECK(g.base_s == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(std::fabs(g.per_sample_s) < 1e-12);
    CHECK(std::fabs(g.per_worker_s) < 1e-12);
  }

  SUBCASE("weak-scaling step times imply a positive per-worker term") {
    // K = 8, 12, 16 at B = 768 with step times 1.45, 1.55, 1.64 s.
    const TimingPoint measured[] = {{8, 96, 1.45}, {12, 64, 1.55}, {16, 48, 1.64}};
    const ParallelFit g = fit_iteration_time(measured);
    CHECK(g.per_worker_s > 0.0);
    for (const auto& p : measured) {
      CHECK(g.iteration_time(p.workers, p.mini_batch) ==
            doctest::Approx(p.iteration_time_s).epsilon(1e-12));
    }
  }

  SUBCASE("degenerate designs name the missing axis") {
    const TimingPoint fixed_b[] = {{8, 64, 1}, {12, 64, 2}, {16, 64, 3}};
    CHECK(message_of([&] { fit_iteration_time(fixed_b); }).find("mini-batch") !=
          std::string::npos);
    const TimingPoint fixed_k[] = {{8, 32, 1}, {8, 64, 2}, {8, 96, 3}};
    CHECK(message_of([&] { fit_iteration_time(fixed_k); }).find("worker count") !=
          std::string::npos);
    const TimingPoint line[] = {{8, 16, 1}, {12, 24, 2}, {16, 32, 3}};
    CHECK(message_of([&] { fit_iteration_time(line); }).find("collinear") !=
          std::string::npos);
    const TimingPoint two[] = {{8, 16, 1}, {12, 24, 2}};
    message_of([&] { fit_iteration_time(two); });
  }
}

TEST_CASE("least squares agrees with the normal-equation oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> kdist(1, 32), bdist(1, 256);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TimingPoint> tp;
    std::vector<std::vector<long double>> x;
    std::vector<long double> y;
    for (int i = 0; i < 8; ++i) {
      const int k = kdist(rng), b = bdist(rng);
      const double tau = 0.3 + 0.002 * b + 0.04 * k + noise(rng);
      tp.push_back({k, b, tau});
      x.push_back({1.0L, static_cast<long double>(b), static_cast<long double>(k)});
      y.push_back(tau);
    }
    const ParallelFit f = fit_iteration_time(tp);
    const auto want = oracle::least_squares(x, y);
    CHECK(f.base_s == doctest::Approx(static_cast<double>(want[0])).epsilon(1e-8));
    CHECK(f.per_sample_s == doctest::Approx(static_cast<double>(want[1])).epsilon(1e-8));
    CHECK(f.per_worker_s == doctest::Approx(static_cast<double>(want[2])).epsilon(1e-8));

    std::vector<NoisePoint> np;
    x.clear();
    y.clear();
    for (int i = 0; i < 6; ++i) {
      const int b = 32 * bdist(rng);
      const double g = 40.0 / std::sqrt(b) + 0.2 + noise(rng);
      np.push_back({b, g});
      x.push_back({1.0L, 1.0L / std::sqrt(static_cast<long double>(b))});
      y.push_back(g);
    }
    const NoiseFit nf = fit_noise_vs_batch(np);
    const auto nw = oracle::least_squares(x, y);
    CHECK(nf.intercept == doctest::Approx(static_cast<double>(nw[0])).epsilon(1e-8));
    CHECK(nf.slope == doctest::Approx(static_cast<double>(nw[1])).epsilon(1e-8));
  }
}

TEST_CASE("two-point fits reproduce their inputs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::uniform_int_distribution<int> bdist(16, 4096);
  for (int trial = 0; trial < 100; ++trial) {
    int b1 = bdist(rng), b2 = bdist(rng);
    if (b1 == b2) continue;
    const NoisePoint np[] = {{b1, u(rng)}, {b2, u(rng)}};
    const NoiseFit nf = fit_noise_vs_batch(np);
    const StatFit s{nf.slope, nf.intercept, 0, 0};
    for (const auto& p : np) {
      CHECK(s.noise_at(p.global_batch) ==
            doctest::Approx(p.normalized_noise).epsilon(1e-10));
    }
    const EpochPoint ep[] = {{u(rng), 100 * u(rng)}, {u(rng) + 5.0, 100 * u(rng)}};
    const EpochFit ef = fit_epochs_vs_noise(ep);
    for (const auto& p : ep) {
      CHECK(ef.base_epochs + ef.slope * p.normalized_noise ==
            doctest::Approx(p.epochs).epsilon(1e-10));
    }
  }
}

TEST_CASE("prediction of the reference workload at (K=8, B=512)") {
  const PerfModel m = testing::reference_model();
  const Prediction p = predict(m, {8, 512}, PricingModel::flat(0.13402), VMShape{});
  // Frozen from an independent evaluation of the chained formulas.
  CHECK(p.normalized_noise == doctest::Approx(2.1213203435596424).epsilon(1e-12));
  CHECK(p.epochs == doctest::Approx(116.06601717798212).epsilon(1e-12));
  CHECK(p.iterations == doctest::Approx(11334.571990037317).epsilon(1e-12));
  CHECK(p.iteration_time_s == doctest::Approx(0.664).epsilon(1e-12));
  CHECK(p.total_time_s == doctest::Approx(7526.155801384779).epsilon(1e-12));
  CHECK(p.cost_usd == doctest::Approx(2.2414564455590846).epsilon(1e-12));

  const auto want = oracle::evaluate(testing::reference_coeffs(0.13402), 8, 512);
  CHECK(oracle::rel_err(p.total_time_s, static_cast<double>(want.time_s)) < 1e-13);
  CHECK(oracle::rel_err(p.cost_usd, static_cast<double>(want.cost_usd)) < 1e-13);
}

TEST_CASE("prediction identities and special cases") {
  PerfModel m = testing::reference_model();
  const PricingModel price = PricingModel::flat(0.13402);
  const auto grid = enumerate_candidates(testing::standard_grid()).valid;
  for (const auto& c : grid) {
    const Prediction p = predict(m, c, price, VMShape{});
    CHECK(p.iterations == p.epochs * 50000.0 / c.global_batch);
    CHECK(p.total_time_s == p.iterations * p.iteration_time_s);
    const auto want = oracle::evaluate(testing::reference_coeffs(0.13402), c.workers,
                                       c.global_batch);
    CHECK(oracle::rel_err(p.total_time_s, static_cast<double>(want.time_s)) < 1e-12);
    CHECK(oracle::rel_err(p.cost_usd, static_cast<double>(want.cost_usd)) < 1e-12);
    CHECK(predict(m, c, PricingModel::flat(0.0), VMShape{}).cost_usd == 0.0);
  }

  SUBCASE("theta = 0 makes epochs constant") {
    m.stat.epochs_slope = 0.0;
    for (const auto& c : grid) {
      CHECK(predict(m, c, price, VMShape{}).epochs == m.stat.epochs_base);
    }
  }
  SUBCASE("non-positive noise or step time is out of domain") {
    m.stat.noise_intercept = -10.0;
    try {
      predict(m, {8, 512}, price, VMShape{});
      FAIL("expected out-of-domain");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOutOfDomain);
    }
    m = testing::reference_model();
    m.parallel.base_s = -5.0;
    CHECK_THROWS_AS(predict(m, {8, 512}, price, VMShape{}), Error);
  }
}

TEST_CASE("monotonicity and price scaling") {
  const PerfModel m = testing::reference_model();
  const auto grid = enumerate_candidates(testing::standard_grid()).valid;
  for (int k : {8, 16}) {
    double prev = INFINITY;
    for (int b : {384, 512, 768, 1024}) {
      const double e = predict(m, {k, b}, PricingModel::flat(1), VMShape{}).epochs;
      CHECK(e < prev);
      prev = e;
    }
  }
  for (double lambda : {0.5, 3.0, 1000.0}) {
    std::vector<TradeoffPoint> base, scaled;
    for (const auto& c : grid) {
      const Prediction a = predict(m, c, PricingModel::flat(0.13402), VMShape{});
      const Prediction b = predict(m, c, PricingModel::flat(0.13402 * lambda), VMShape{});
      CHECK(b.total_time_s == a.total_time_s);
      CHECK(b.epochs == a.epochs);
      CHECK(b.cost_usd == doctest::Approx(lambda * a.cost_usd).epsilon(1e-12));
      base.push_back({c, a.total_time_s, a.cost_usd});
      scaled.push_back({c, b.total_time_s, b.cost_usd});
    }
    CHECK(min_cost_time(base).config == min_cost_time(scaled).config);
  }
}

TEST_CASE("averaging noise fits over worker counts") {
  const WorkerNoiseFit fits[] = {{8, {40.0, 0.1}}, {16, {56.0, 0.3}}};
  const NoiseFit f = average_over_workers(fits);
  CHECK(f.slope == doctest::Approx(48.0));
  CHECK(f.intercept == doctest::Approx(0.2));
  const WorkerNoiseFit one[] = {{4, {1.5, 2.5}}};
  CHECK(average_over_workers(one).slope == 1.5);
  const WorkerNoiseFit same[] = {{4, {1.5, 2.5}}, {8, {1.5, 2.5}}, {12, {1.5, 2.5}}};
  CHECK(average_over_workers(same).intercept == doctest::Approx(2.5));
  CHECK_THROWS_AS(average_over_workers(std::span<const WorkerNoiseFit>{}), Error);
}

TEST_CASE("coefficient flags") {
  CHECK(StatFit{48, 0, 10, 50}.flags().empty());
  CHECK(StatFit{-1, 0, 10, 50}.flags().size() == 1);
  CHECK(StatFit{1, 0, 10, -50}.flags().size() == 1);
  CHECK(StatFit{1, 0, -10, 50}.flags().size() == 1);
  PerfModel bad = testing::reference_model();
  bad.dataset_size = 0;
  CHECK_THROWS_AS(validate(bad), Error);
  CHECK(provenance_from_string(to_string(Provenance::kUniversal)) ==
        Provenance::kUniversal);
}

}  // TEST_SUITE
