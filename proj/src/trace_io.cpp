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

#include "costtune/trace_io.hpp"

#include <map>
#include <set>

#include "costtune/error.hpp"

namespace costtune {
namespace {

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::kParse, where + ": " + what);
}

const Json& member(const Json& obj, const char* name, const std::string& where) {
  if (!obj.contains(name)) parse_error(where, std::string("missing field \"") + name + "\"");
  return obj.at(name);
}

double number(const Json& obj, const char* name, const std::string& where) {
  const Json& v = member(obj, name, where);
  if (!v.is_number()) parse_error(where, std::string("\"") + name + "\" must be a number");
  return v.get<double>();
}

std::int64_t integer(const Json& obj, const char* name, const std::string& where) {
  const Json& v = member(obj, name, where);
  if (!v.is_number_integer()) {
    parse_error(where, std::string("\"") + name + "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

int small_int(const Json& obj, const char* name, const std::string& where) {
  const std::int64_t v = integer(obj, name, where);
  if (v < 1 || v > 1000000000) {
    parse_error(where, std::string("\"") + name + "\" out of range");
  }
  return static_cast<int>(v);
}

std::string location(const std::string& source, int line_no) {
  return source + ":" + std::to_string(line_no);
}

}  // namespace

std::string format_trace_line(const JobConfig& config, const IterationSample& s) {
  Json j;
  j["t"] = s.iteration;
  j["K"] = config.workers;
  j["B"] = config.global_batch;
  j["worker_sqnorms"] = s.worker_sqnorms;
  j["agg_sqnorm"] = s.aggregated_sqnorm;
  j["compute_s"] = s.compute_time_s;
  j["sync_s"] = s.sync_time_s;
  return dump_json(j, -1);
}

IterationSample parse_trace_line(std::string_view line, const std::string& source,
                                 int line_no, JobConfig& config) {
  const std::string where = location(source, line_no);
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    parse_error(where, std::string("malformed JSON (") + e.what() + ")");
  }
  if (!j.is_object()) parse_error(where, "record is not an object");
  IterationSample s;
  s.iteration = integer(j, "t", where);
  config.workers = small_int(j, "K", where);
  config.global_batch = small_int(j, "B", where);
  const Json& norms = member(j, "worker_sqnorms", where);
  if (!norms.is_array()) parse_error(where, "\"worker_sqnorms\" must be an array");
  for (const auto& v : norms) {
    if (!v.is_number()) parse_error(where, "\"worker_sqnorms\" must hold numbers");
    s.worker_sqnorms.push_back(v.get<double>());
  }
  s.aggregated_sqnorm = number(j, "agg_sqnorm", where);
  s.compute_time_s = number(j, "compute_s", where);
  s.sync_time_s = number(j, "sync_s", where);
  if (s.workers() != config.workers) {
    parse_error(where, "\"worker_sqnorms\" has " + std::to_string(s.workers()) +
                           " entries but K=" + std::to_string(config.workers));
  }
  try {
    validate(config);
    validate(s);
  } catch (const Error& e) {
    parse_error(where, e.what());
  }
  return s;
}

Trace parse_trace(std::string_view text, const std::string& source) {
  Trace trace;
  trace.source = source;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    JobConfig config;
    IterationSample s = parse_trace_line(line, source, line_no, config);
    if (trace.samples.empty()) {
      trace.config = config;
    } else if (config != trace.config) {
      parse_error(location(source, line_no),
                  "record for " + to_string(config) + " in a trace of " +
                      to_string(trace.config));
    }
    trace.samples.push_back(std::move(s));
  }
  if (trace.samples.empty()) parse_error(source, "trace has no records");
  return trace;
}

Trace read_trace_file(const std::filesystem::path& path) {
  return parse_trace(read_file(path), path.string());
}

void write_trace_file(const std::filesystem::path& path, const JobConfig& config,
                      std::span<const IterationSample> samples) {
  std::string out;
  for (const auto& s : samples) {
    out += format_trace_line(config, s);
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

AnchorSet parse_anchors(std::string_view text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    parse_error(source, std::string("malformed JSON (") + e.what() + ")");
  }
  if (!j.is_object()) parse_error(source, "anchors document is not an object");
  const Json& list = member(j, "anchors", source);
  if (!list.is_array()) parse_error(source, "\"anchors\" must be an array");
  AnchorSet set;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = source + ": anchors[" + std::to_string(i) + "]";
    if (!list[i].is_object()) parse_error(where, "not an object");
    Anchor a;
    a.config.workers = small_int(list[i], "K", where);
    a.config.global_batch = small_int(list[i], "B", where);
    a.epochs = number(list[i], "epochs", where);
    if (!(a.epochs > 0.0)) parse_error(where, "\"epochs\" must be positive");
    set.anchors.push_back(a);
  }
  if (j.contains("dataset_size")) {
    const std::int64_t d = integer(j, "dataset_size", source);
    if (d < 1) parse_error(source, "\"dataset_size\" must be >= 1");
    set.dataset_size = d;
  }
  return set;
}

AnchorSet read_anchors_file(const std::filesystem::path& path) {
  return parse_anchors(read_file(path), path.string());
}

void write_anchors_file(const std::filesystem::path& path, const AnchorSet& set) {
  Json j;
  j["anchors"] = Json::array();
  for (const auto& a : set.anchors) {
    j["anchors"].push_back(
        {{"K", a.config.workers}, {"B", a.config.global_batch}, {"epochs", a.epochs}});
  }
  if (set.dataset_size) j["dataset_size"] = *set.dataset_size;
  write_file_atomic(path, dump_json(j) + "\n");
}

TraceFitReport fit_traces(std::span<const Trace> traces, const AnchorSet& anchors,
                          std::int64_t dataset_size) {
  if (traces.empty()) fail(ErrorCode::kEmptyInput, "no traces to fit");
  if (dataset_size < 1) fail(ErrorCode::kValidation, "dataset size must be >= 1");
  TraceFitReport report;

  // Several traces of one configuration are merged.
  std::map<JobConfig, TraceSummary> merged;
  std::map<JobConfig, std::size_t> noise_counts;
  for (const auto& t : traces) {
    TraceSummary& s = merged[t.config];
    s.config = t.config;
    for (const auto& sample : t.samples) {
      s.iteration_time_s += sample.iteration_time_s();
      ++s.samples;
      if (sample.aggregated_sqnorm > 0.0) {
        s.normalized_noise += compute_raw_noise(sample) / sample.workers();
        ++noise_counts[t.config];
      }
    }
  }
  for (auto& [config, s] : merged) {
    s.iteration_time_s /= static_cast<double>(s.samples);
    if (!noise_counts[config]) {
      fail(ErrorCode::kDegenerateFit,
           "every step of " + to_string(config) + " has a zero aggregated gradient");
    }
    s.normalized_noise /= static_cast<double>(noise_counts[config]);
    report.traces.push_back(s);
  }

  std::map<int, std::vector<NoisePoint>> by_workers;
  std::vector<NoisePoint> pooled;
  std::set<int> batches;
  std::vector<TimingPoint> timing;
  for (const auto& s : report.traces) {
    const NoisePoint p{s.config.global_batch, s.normalized_noise};
    by_workers[s.config.workers].push_back(p);
    pooled.push_back(p);
    batches.insert(s.config.global_batch);
    timing.push_back({s.config.workers, mini_batch(s.config), s.iteration_time_s});
  }
  if (batches.size() < 2) {
    fail(ErrorCode::kDegenerateFit,
         "noise fit needs at least two distinct global batch sizes B; traces "
         "cover only B=" + std::to_string(*batches.begin()));
  }
  std::vector<WorkerNoiseFit> per_k;
  for (const auto& [k, pts] : by_workers) {
    std::set<int> bs;
    for (const auto& p : pts) bs.insert(p.global_batch);
    if (bs.size() >= 2) per_k.push_back({k, fit_noise_vs_batch(pts)});
  }
  const NoiseFit noise =
      per_k.empty() ? fit_noise_vs_batch(pooled) : average_over_workers(per_k);

  std::vector<EpochPoint> epoch_points;
  std::set<int> anchor_batches;
  for (const auto& a : anchors.anchors) {
    validate(a.config);
    const double n =
        StatFit{noise.slope, noise.intercept, 0.0, 0.0}.noise_at(a.config.global_batch);
    epoch_points.push_back({n, a.epochs});
    anchor_batches.insert(a.config.global_batch);
  }
  if (anchor_batches.size() < 2) {
    fail(ErrorCode::kDegenerateFit,
         "epoch fit needs anchors at two or more distinct batch sizes B");
  }
  const EpochFit epochs = fit_epochs_vs_noise(epoch_points);
  const ParallelFit parallel = fit_iteration_time(timing);

  report.model.stat = {noise.slope, noise.intercept, epochs.base_epochs, epochs.slope};
  report.model.parallel = parallel;
  report.model.dataset_size = dataset_size;
  report.model.provenance = Provenance::kFullSearch;
  for (auto& s : report.traces) {
    s.noise_residual =
        s.normalized_noise - report.model.stat.noise_at(s.config.global_batch);
    s.time_residual = s.iteration_time_s -
                      parallel.iteration_time(s.config.workers, mini_batch(s.config));
  }
  report.flags = report.model.stat.flags();
  return report;
}

}  // namespace costtune
