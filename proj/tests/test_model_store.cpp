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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "costtune/error.hpp"
#include "costtune/json_io.hpp"
#include "costtune/model_store.hpp"
#include "test_util.hpp"

using namespace costtune;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kUsage;
}

StoredModel stored(const std::string& fp, const PerfModel& m) {
  return {fp, m, "2026-03-01T12:00:00Z", kModelSchemaVersion};
}

PerfModel scaled(double f) {
  PerfModel m = testing::reference_model();
  m.stat = {48 * f, 0.1 * f, 10 * f, 50 * f};
  m.parallel = {0.2 * f, 0.001 * f, 0.05 * f};
  return m;
}

void check_same(const PerfModel& a, const PerfModel& b) {
  CHECK(same_bits(a.stat.noise_slope, b.stat.noise_slope));
  CHECK(same_bits(a.stat.noise_intercept, b.stat.noise_intercept));
  CHECK(same_bits(a.stat.epochs_base, b.stat.epochs_base));
  CHECK(same_bits(a.stat.epochs_slope, b.stat.epochs_slope));
  CHECK(same_bits(a.parallel.base_s, b.parallel.base_s));
  CHECK(same_bits(a.parallel.per_sample_s, b.parallel.per_sample_s));
  CHECK(same_bits(a.parallel.per_worker_s, b.parallel.per_worker_s));
  CHECK(a.dataset_size == b.dataset_size);
}

}  // namespace

TEST_SUITE("model_store") {

TEST_CASE("round trip is bit exact") {
  testing::TempDir dir;
  ModelStore store(dir.path());
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 200; ++i) {
    PerfModel m;
    auto r = [&] { return std::ldexp(u(rng), ex(rng) / 10); };
    m.stat = {r(), r(), r(), r()};
    m.parallel = {r(), r(), r()};
    m.dataset_size = 1 + (rng() % 10000000);
    m.provenance = Provenance::kPartialSearch;
    const std::string fp = "model-" + std::to_string(i % 7);
    store.save(stored(fp, m));
    const StoredModel back = store.load(fp);
    check_same(back.model, m);
    CHECK(back.model.provenance == Provenance::kPartialSearch);
    CHECK(back.created_at == "2026-03-01T12:00:00Z");
    CHECK(back.schema_version == kModelSchemaVersion);
  }
  CHECK(store.fingerprints().size() == 7);
  // Extreme representable values survive too.
  PerfModel m = testing::reference_model();
  m.stat.noise_slope = 0.1 + 0.2;
  m.stat.noise_intercept = 5e-324;
  m.parallel.base_s = 1.7976931348623157e308;
  store.save(stored("edge", m));
  check_same(store.load("edge").model, m);
}

TEST_CASE("latest save wins") {
  testing::TempDir dir;
  ModelStore store(dir.path());
  store.save(stored("job", scaled(1.0)));
  store.save(stored("job", scaled(2.0)));
  check_same(store.load("job").model, scaled(2.0));
  CHECK(store.fingerprints() == std::vector<std::string>{"job"});
}

TEST_CASE("fingerprints") {
  testing::TempDir dir;
  ModelStore store(dir.path());
  CHECK(code_of([&] { store.save(stored("", scaled(1.0))); }) == ErrorCode::kValidation);
  CHECK(code_of([&] { store.load("missing"); }) == ErrorCode::kNotFound);
  CHECK_FALSE(store.contains("missing"));
  // Unsafe characters map to distinct files.
  store.save(stored("a/b", scaled(1.0)));
  store.save(stored("a_b", scaled(2.0)));
  check_same(store.load("a/b").model, scaled(1.0));
  check_same(store.load("a_b").model, scaled(2.0));
}

TEST_CASE("damaged documents are reported without breaking the store") {
  testing::TempDir dir;
  ModelStore store(dir.path());
  store.save(stored("good", scaled(1.0)));
  store.save(stored("bad", scaled(2.0)));
  std::filesystem::path bad_file;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
    if (entry.path().filename().string().rfind("bad-", 0) == 0) bad_file = entry.path();
  }
  REQUIRE_FALSE(bad_file.empty());
  const std::string text = read_file(bad_file);
  std::filesystem::resize_file(bad_file, text.size() / 2);

  CHECK(code_of([&] { store.load("bad"); }) == ErrorCode::kCorruptDocument);
  check_same(store.load("good").model, scaled(1.0));
  store.save(stored("other", scaled(3.0)));
  check_same(store.load("other").model, scaled(3.0));
  store.save(stored("bad", scaled(4.0)));
  check_same(store.load("bad").model, scaled(4.0));
}

TEST_CASE("schema violations") {
  Json doc = to_document(stored("x", scaled(1.0)));
  CHECK_NOTHROW(from_document(doc));
  Json v = doc;
  v["schema_version"] = kModelSchemaVersion + 1;
  CHECK(code_of([&] { from_document(v); }) == ErrorCode::kCorruptDocument);
  v = doc;
  v["stat"]["a_n"] = 48.0;
  CHECK(code_of([&] { from_document(v); }) == ErrorCode::kCorruptDocument);
  v = doc;
  v["parallel"].erase("c_K");
  CHECK(code_of([&] { from_document(v); }) == ErrorCode::kCorruptDocument);
  v = doc;
  v["provenance"] = "guess";
  CHECK(code_of([&] { from_document(v); }) == ErrorCode::kCorruptDocument);
  v = doc;
  v["fingerprint"] = "";
  CHECK(code_of([&] { from_document(v); }) == ErrorCode::kCorruptDocument);
  CHECK(doc["stat"]["a_n"].is_string());
  CHECK(doc["created_at"] == "2026-03-01T12:00:00Z");
}

TEST_CASE("universal average") {
  testing::TempDir dir;
  ModelStore store(dir.path());
  CHECK(code_of([&] { store.universal_average(1); }) == ErrorCode::kNotFound);

  store.save(stored("one", scaled(1.0)));
  PerfModel u = store.universal_average(777);
  PerfModel want = scaled(1.0);
  want.dataset_size = 777;
  check_same(u, want);
  CHECK(u.provenance == Provenance::kUniversal);

  store.save(stored("three", scaled(3.0)));
  u = store.universal_average(50000);
  CHECK(u.stat.noise_slope == doctest::Approx(96.0));
  CHECK(u.stat.epochs_slope == doctest::Approx(100.0));
  CHECK(u.parallel.per_worker_s == doctest::Approx(0.1));
  CHECK(u.parallel.base_s == doctest::Approx(0.4));

  testing::TempDir same_dir;
  ModelStore same(same_dir.path());
  for (const char* fp : {"a", "b", "c", "d"}) same.save(stored(fp, scaled(1.7)));
  PerfModel avg = same.universal_average(50000);
  CHECK(avg.stat.noise_slope == doctest::Approx(scaled(1.7).stat.noise_slope).epsilon(1e-15));
  CHECK(avg.parallel.per_sample_s ==
        doctest::Approx(scaled(1.7).parallel.per_sample_s).epsilon(1e-15));
}

TEST_CASE("timestamps") {
  const auto t = std::chrono::system_clock::time_point{} + std::chrono::seconds(1700000000);
  CHECK(format_rfc3339(t) == "2023-11-14T22:13:20Z");
}

}  // TEST_SUITE
