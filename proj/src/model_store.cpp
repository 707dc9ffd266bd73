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

#include "costtune/model_store.hpp"

#include <cctype>
#include <charconv>
#include <ctime>
#include <system_error>

#include "costtune/error.hpp"

namespace costtune {
namespace {

namespace fs = std::filesystem;

constexpr const char* kIndexFile = "index.json";

[[noreturn]] void corrupt(const std::string& what) {
  fail(ErrorCode::kCorruptDocument, "corrupt model document: " + what);
}

const Json& field(const Json& obj, const char* name, const std::string& path) {
  if (!obj.is_object() || !obj.contains(name)) {
    corrupt("missing field " + path + name);
  }
  return obj.at(name);
}

double decimal_field(const Json& obj, const char* name, const std::string& path) {
  const Json& v = field(obj, name, path);
  if (!v.is_string()) corrupt(path + name + " must be a decimal string");
  return parse_decimal(v.get<std::string>(), ErrorCode::kCorruptDocument);
}

std::string string_field(const Json& obj, const char* name) {
  const Json& v = field(obj, name, "");
  if (!v.is_string()) corrupt(std::string(name) + " must be a string");
  return v.get<std::string>();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string format_rfc3339(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_document(const StoredModel& s) {
  Json doc;
  doc["schema_version"] = s.schema_version;
  doc["fingerprint"] = s.fingerprint;
  doc["created_at"] = s.created_at;
  doc["dataset_size"] = std::to_string(s.model.dataset_size);
  doc["provenance"] = std::string(to_string(s.model.provenance));
  doc["stat"] = {
      {"a_n", format_decimal(s.model.stat.noise_slope)},
      {"c_n", format_decimal(s.model.stat.noise_intercept)},
      {"e_star", format_decimal(s.model.stat.epochs_base)},
      {"theta", format_decimal(s.model.stat.epochs_slope)},
  };
  doc["parallel"] = {
      {"c0", format_decimal(s.model.parallel.base_s)},
      {"c_b", format_decimal(s.model.parallel.per_sample_s)},
      {"c_K", format_decimal(s.model.parallel.per_worker_s)},
  };
  return doc;
}

StoredModel from_document(const Json& doc) {
  if (!doc.is_object()) corrupt("top level is not an object");
  StoredModel s;
  const Json& version = field(doc, "schema_version", "");
  if (!version.is_number_integer()) corrupt("schema_version must be an integer");
  s.schema_version = version.get<int>();
  if (s.schema_version != kModelSchemaVersion) {
    corrupt("unsupported schema_version " + std::to_string(s.schema_version));
  }
  s.fingerprint = string_field(doc, "fingerprint");
  if (s.fingerprint.empty()) corrupt("empty fingerprint");
  s.created_at = string_field(doc, "created_at");

  const Json& ds = field(doc, "dataset_size", "");
  if (ds.is_string()) {
    const std::string text = ds.get<std::string>();
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      corrupt("dataset_size is not an integer");
    }
    s.model.dataset_size = v;
  } else if (ds.is_number_integer()) {
    s.model.dataset_size = ds.get<std::int64_t>();
  } else {
    corrupt("dataset_size must be an integer");
  }
  try {
    s.model.provenance = provenance_from_string(string_field(doc, "provenance"));
  } catch (const Error& e) {
    corrupt(e.what());
  }

  const Json& stat = field(doc, "stat", "");
  s.model.stat.noise_slope = decimal_field(stat, "a_n", "stat.");
  s.model.stat.noise_intercept = decimal_field(stat, "c_n", "stat.");
  s.model.stat.epochs_base = decimal_field(stat, "e_star", "stat.");
  s.model.stat.epochs_slope = decimal_field(stat, "theta", "stat.");
  const Json& par = field(doc, "parallel", "");
  s.model.parallel.base_s = decimal_field(par, "c0", "parallel.");
  s.model.parallel.per_sample_s = decimal_field(par, "c_b", "parallel.");
  s.model.parallel.per_worker_s = decimal_field(par, "c_K", "parallel.");
  s.model.fingerprint = s.fingerprint;
  try {
    validate(s.model);
  } catch (const Error& e) {
    corrupt(e.what());
  }
  return s;
}

StoredModel read_model_file(const fs::path& path) {
  const std::string text = read_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    corrupt(path.string() + ": " + e.what());
  }
  return from_document(doc);
}

void write_model_file(const fs::path& path, const StoredModel& stored) {
  if (stored.fingerprint.empty()) {
    fail(ErrorCode::kValidation, "model fingerprint must not be empty");
  }
  validate(stored.model);
  write_file_atomic(path, dump_json(to_document(stored)) + "\n");
}

ModelStore::ModelStore(fs::path dir) : dir_(std::move(dir)) {}

fs::path ModelStore::document_path(const std::string& fingerprint) const {
  std::string name;
  for (char c : fingerprint) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                      c == '_' || c == '.';
    name.push_back(safe ? c : '_');
  }
  if (name.size() > 64) name.resize(64);
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(fingerprint)));
  return dir_ / (name + "-" + hash + ".json");
}

Json ModelStore::read_index() const {
  const fs::path path = dir_ / kIndexFile;
  std::error_code ec;
  if (!fs::exists(path, ec)) return Json{{"models", Json::object()}};
  try {
    Json index = Json::parse(read_file(path));
    if (!index.is_object() || !index.contains("models") ||
        !index["models"].is_object()) {
      corrupt("store index " + path.string() + " has no models map");
    }
    return index;
  } catch (const Json::exception& e) {
    corrupt("store index " + path.string() + ": " + e.what());
  }
}

void ModelStore::save(const StoredModel& stored) {
  if (stored.fingerprint.empty()) {
    fail(ErrorCode::kValidation, "model fingerprint must not be empty");
  }
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) fail(ErrorCode::kStorage, "cannot create store " + dir_.string());
  const fs::path doc = document_path(stored.fingerprint);
  write_model_file(doc, stored);
  Json index = read_index();
  index["models"][stored.fingerprint] = doc.filename().string();
  write_file_atomic(dir_ / kIndexFile, dump_json(index) + "\n");
}

StoredModel ModelStore::load(const std::string& fingerprint) const {
  const fs::path doc = document_path(fingerprint);
  std::error_code ec;
  if (!fs::exists(doc, ec)) {
    fail(ErrorCode::kNotFound, "no stored model for fingerprint '" +
                                   fingerprint + "' in " + dir_.string());
  }
  StoredModel s = read_model_file(doc);
  if (s.fingerprint != fingerprint) {
    corrupt(doc.string() + " holds fingerprint '" + s.fingerprint + "'");
  }
  return s;
}

bool ModelStore::contains(const std::string& fingerprint) const {
  std::error_code ec;
  return fs::exists(document_path(fingerprint), ec);
}

std::vector<std::string> ModelStore::fingerprints() const {
  std::vector<std::string> out;
  const Json index = read_index();
  for (auto it = index["models"].begin(); it != index["models"].end(); ++it) {
    out.push_back(it.key());
  }
  return out;
}

PerfModel ModelStore::universal_average(std::int64_t dataset_size) const {
  const auto fps = fingerprints();
  if (fps.empty()) {
    fail(ErrorCode::kNotFound, "model store " + dir_.string() + " is empty");
  }
  PerfModel avg;
  for (const auto& fp : fps) {
    const PerfModel m = load(fp).model;
    avg.stat.noise_slope += m.stat.noise_slope;
    avg.stat.noise_intercept += m.stat.noise_intercept;
    avg.stat.epochs_base += m.stat.epochs_base;
    avg.stat.epochs_slope += m.stat.epochs_slope;
    avg.parallel.base_s += m.parallel.base_s;
    avg.parallel.per_sample_s += m.parallel.per_sample_s;
    avg.parallel.per_worker_s += m.parallel.per_worker_s;
  }
  const double n = static_cast<double>(fps.size());
  avg.stat.noise_slope /= n;
  avg.stat.noise_intercept /= n;
  avg.stat.epochs_base /= n;
  avg.stat.epochs_slope /= n;
  avg.parallel.base_s /= n;
  avg.parallel.per_sample_s /= n;
  avg.parallel.per_worker_s /= n;
  avg.dataset_size = dataset_size;
  avg.fingerprint = "universal";
  avg.provenance = Provenance::kUniversal;
  return avg;
}

}  // namespace costtune
