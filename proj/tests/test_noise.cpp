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

#include "costtune/error.hpp"
#include "costtune/noise.hpp"
#include "costtune/simulator.hpp"

using namespace costtune;

namespace {

IterationSample sample(std::vector<double> workers, double aggregated) {
  IterationSample s;
  s.worker_sqnorms = std::move(workers);
  s.aggregated_sqnorm = aggregated;
  return s;
}

// Stream of raw values fed as single-worker samples with aggregated norm 1.
NoiseEstimate feed(const std::vector<double>& raws, const EwmaConfig& cfg) {
  NoiseEstimate est;
  for (double r : raws) est = update(std::move(est), sample({r}, 1.0), cfg);
  return est;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("raw noise ratio") {
  CHECK(compute_raw_noise(sample({4.0}, 4.0)) == 1.0);
  CHECK(compute_raw_noise(sample({9, 9, 9, 9}, 9.0)) == 1.0);
  // Orthogonal unit gradients (1,0) and (0,1): the mean is (0.5, 0.5).
  const double agg = 0.5 * 0.5 + 0.5 * 0.5;
  CHECK(compute_raw_noise(sample({1.0, 1.0}, agg)) == 2.0);
}

TEST_CASE("zero aggregated gradient") {
  CHECK_THROWS_AS(compute_raw_noise(sample({1.0}, 0.0)), Error);
  try {
    compute_raw_noise(sample({1.0}, 0.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateGradient);
  }
  EwmaConfig cfg;
  NoiseEstimate est = feed({2.0, 3.0}, cfg);
  const double before = est.smoothed;
  est = update(est, sample({5.0}, 0.0), cfg);
  CHECK(est.smoothed == before);
  CHECK(est.samples_seen == 2);
  CHECK(est.samples_skipped == 1);
}

TEST_CASE("EWMA update") {
  EwmaConfig cfg;
  SUBCASE("alpha 1 tracks the latest raw value") {
    cfg.alpha = 1.0;
    NoiseEstimate est;
    for (double r : {3.0, 7.0, 1.5, 4.25}) {
      est = update(est, sample({r}, 1.0), cfg);
      CHECK(est.smoothed == r);
    }
  }
  SUBCASE("alpha 0.5 over [2, 4]") {
    cfg.alpha = 0.5;
    CHECK(feed({2.0, 4.0}, cfg).smoothed == 3.0);
  }
  SUBCASE("constant stream is a fixed point") {
    NoiseEstimate est;
    for (int i = 0; i < 500; ++i) {
      est = update(est, sample({0.37}, 1.0), cfg);
      CHECK(est.smoothed == 0.37);
    }
  }
  SUBCASE("normalized is smoothed / K exactly") {
    NoiseEstimate est;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
      est = update(est, sample({u(rng), u(rng), u(rng)}, u(rng)), cfg);
      CHECK(est.normalized == est.smoothed / 3);
    }
  }
  SUBCASE("worker count may not change") {
    NoiseEstimate est = update({}, sample({1.0, 1.0}, 1.0), cfg);
    CHECK_THROWS_AS(update(est, sample({1.0}, 1.0), cfg), Error);
  }
}

TEST_CASE("smoothed value stays inside the hull of raw values") {
  std::mt19937_64 rng(11);
  std::lognormal_distribution<double> raw(0.0, 2.0);
  std::uniform_real_distribution<double> alpha(0.001, 1.0);
  for (int stream = 0; stream < 50; ++stream) {
    EwmaConfig cfg;
    cfg.alpha = alpha(rng);
    NoiseEstimate est;
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 300; ++i) {
      const double r = raw(rng);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      est = update(est, sample({r}, 1.0), cfg);
      CHECK(est.smoothed >= lo);
      CHECK(est.smoothed <= hi);
    }
  }
}

TEST_CASE("stabilization") {
  EwmaConfig cfg;
  SUBCASE("warmup gate") {
    const NoiseEstimate est = feed(std::vector<double>(999, 1.0), cfg);
    CHECK_FALSE(est.stabilized);
    CHECK_FALSE(is_stabilized(est, cfg));
  }
  SUBCASE("constant stream past warmup and window") {
    CHECK(feed(std::vector<double>(1000, 1.0), cfg).stabilized);
  }
  SUBCASE("ramp with R=500 settles between 1000 and 5000 steps") {
    cfg = {0.01, 1000, 200, 0.01};
    NoiseEstimate est;
    std::int64_t t = 0;
    while (!est.stabilized && t < 100000) {
      const double ramp = 1.0 - std::exp(-static_cast<double>(t) / 500.0);
      est = update(est, sample({3.0 * ramp}, 1.0), cfg);
      ++t;
    }
    CHECK(t > 1000);
    CHECK(t <= 5000);

    // Independent replay: first step where the trailing spread is within 1%.
    double s = 0.0;
    std::vector<double> window;
    std::int64_t expected = -1;
    for (std::int64_t i = 0; i < 100000 && expected < 0; ++i) {
      const double r = 3.0 * (1.0 - std::exp(-static_cast<double>(i) / 500.0));
      s = i == 0 ? r : 0.01 * r + 0.99 * s;
      window.push_back(s);
      if (window.size() > 200) window.erase(window.begin());
      if (i + 1 >= 1000 && window.size() == 200) {
        const auto [mn, mx] = std::minmax_element(window.begin(), window.end());
        if ((*mx - *mn) / *mx <= 0.01) expected = i + 1;
      }
    }
    CHECK(t == expected);
  }
  SUBCASE("looser tolerance never un-stabilizes a stream") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z(0.0, 0.05);
    for (int stream = 0; stream < 20; ++stream) {
      EwmaConfig tight{0.05, 50, 20, 0.01};
      EwmaConfig loose = tight;
      loose.stability_rel_tol = 0.03;
      NoiseEstimate a, b;
      for (int i = 0; i < 400; ++i) {
        const IterationSample s = sample({1.0 + z(rng)}, 1.0);
        a = update(a, s, tight);
        b = update(b, s, loose);
        if (a.stabilized) CHECK(b.stabilized);
        CHECK(is_stabilized(a, loose) == b.stabilized);
      }
    }
  }
}

TEST_CASE("spread and config validation") {
  CHECK(window_spread({}) == 0.0);
  CHECK(window_spread({2.0, 2.0}) == 0.0);
  CHECK(window_spread({1.0, 2.0, 4.0}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(validate(EwmaConfig{0.0, 10, 10, 0.1}), Error);
  CHECK_THROWS_AS(validate(EwmaConfig{1.5, 10, 10, 0.1}), Error);
  CHECK_THROWS_AS(validate(EwmaConfig{0.5, 10, 1, 0.1}), Error);
  CHECK_THROWS_AS(validate(EwmaConfig{0.5, 10, 10, 0.0}), Error);
  CHECK_NOTHROW(validate(EwmaConfig{}));
}

TEST_CASE("i.i.d. gradients saturate the raw noise at K") {
  std::mt19937_64 rng(3);
  EwmaConfig cfg{0.05, 200, 50, 0.02};
  for (int k : {2, 4}) {
    NoiseEstimate est;
    for (int i = 0; i < 2000 && !est.stabilized; ++i) {
      est = update(est, iid_gradient_sample(k, 2000, rng, i), cfg);
    }
    REQUIRE(est.stabilized);
    CHECK(est.normalized == doctest::Approx(1.0).epsilon(0.02));
  }
}

}  // TEST_SUITE
