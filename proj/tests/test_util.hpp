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

#ifndef COSTTUNE_TESTS_TEST_UTIL_HPP_
#define COSTTUNE_TESTS_TEST_UTIL_HPP_

#include <atomic>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "costtune/cli.hpp"
#include "costtune/perf_model.hpp"
#include "costtune/simulator.hpp"
#include "oracle.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("costtune_test_" + std::to_string(rd()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = costtune::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// The hand-evaluated reference workload: a_n=48, c_n=0, e*=10, theta=50,
// c0=0.2, c_b=0.001, c_K=0.05, D=50000.
inline costtune::PerfModel reference_model() {
  costtune::PerfModel m;
  m.stat = {48.0, 0.0, 10.0, 50.0};
  m.parallel = {0.2, 0.001, 0.05};
  m.dataset_size = 50000;
  m.fingerprint = "reference";
  return m;
}

inline costtune::SimWorkload reference_workload() {
  costtune::SimWorkload w;
  w.name = "reference";
  w.dataset_size = 50000;
  w.noise = {48.0, 0.0};
  w.epochs = {10.0, 50.0};
  w.parallel = {0.2, 0.001, 0.05};
  w.ramp_iters = 500.0;
  return w;
}

inline oracle::Coeffs reference_coeffs(double price) {
  oracle::Coeffs c;
  c.a_n = 48;
  c.c_n = 0;
  c.e_star = 10;
  c.theta = 50;
  c.c0 = 0.2L;
  c.c_b = 0.001L;
  c.c_k = 0.05L;
  c.dataset = 50000;
  c.price_per_worker_hr = price;
  return c;
}

inline oracle::Coeffs coeffs_of(const costtune::SimWorkload& w, double price) {
  oracle::Coeffs c;
  c.a_n = w.noise.slope;
  c.c_n = w.noise.intercept;
  c.e_star = w.epochs.base_epochs;
  c.theta = w.epochs.slope;
  c.c0 = w.parallel.base_s;
  c.c_b = w.parallel.per_sample_s;
  c.c_k = w.parallel.per_worker_s;
  c.dataset = static_cast<long double>(w.dataset_size);
  c.price_per_worker_hr = price;
  return c;
}

inline costtune::SearchBounds standard_grid() {
  return {8, 20, 4, 384, 1024, {384, 512, 768, 1024}};
}

}  // namespace testing

#endif  // COSTTUNE_TESTS_TEST_UTIL_HPP_
