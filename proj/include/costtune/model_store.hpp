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

#ifndef COSTTUNE_MODEL_STORE_HPP_
#define COSTTUNE_MODEL_STORE_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "costtune/json_io.hpp"
#include "costtune/perf_model.hpp"

namespace costtune {

inline constexpr int kModelSchemaVersion = 1;

struct StoredModel {
  std::string fingerprint;
  PerfModel model;
  std::string created_at;  // RFC 3339, UTC
  int schema_version = kModelSchemaVersion;
};

std::string format_rfc3339(std::chrono::system_clock::time_point t);

// Model document: every coefficient is a decimal string so that a
// save/load round trip reproduces the doubles bit for bit.
Json to_document(const StoredModel& stored);
// Throws kCorruptDocument on schema violations.
StoredModel from_document(const Json& doc);

StoredModel read_model_file(const std::filesystem::path& path);
void write_model_file(const std::filesystem::path& path, const StoredModel& stored);

/// Directory of model documents, one per fingerprint, plus index.json.
/// One writer per directory; readers may run concurrently since every write
/// is a temp-file rename.
class ModelStore {
 public:
  explicit ModelStore(std::filesystem::path dir);

  void save(const StoredModel& stored);
  StoredModel load(const std::string& fingerprint) const;
  bool contains(const std::string& fingerprint) const;
  std::vector<std::string> fingerprints() const;

  // Coefficient-wise mean over every stored model. The dataset size comes
  // from the requesting job.
  PerfModel universal_average(std::int64_t dataset_size) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path document_path(const std::string& fingerprint) const;
  Json read_index() const;

  std::filesystem::path dir_;
};

}  // namespace costtune

#endif  // COSTTUNE_MODEL_STORE_HPP_
