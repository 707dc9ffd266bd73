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

#ifndef COSTTUNE_TRACE_IO_HPP_
#define COSTTUNE_TRACE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "costtune/config.hpp"
#include "costtune/json_io.hpp"
#include "costtune/noise.hpp"
#include "costtune/perf_model.hpp"

namespace costtune {

/// Profiled steps of one configuration, as stored in a JSON Lines trace:
///   {"t": 0, "K": 8, "B": 512, "worker_sqnorms": [...], "agg_sqnorm": 1.0,
///    "compute_s": 0.3, "sync_s": 0.3}
struct Trace {
  std::string source;  // file name, for diagnostics
  JobConfig config;
  std::vector<IterationSample> samples;
};

// One trace line. Errors are kParse and cite `source:line_no`.
std::string format_trace_line(const JobConfig& config, const IterationSample& s);
IterationSample parse_trace_line(std::string_view line, const std::string& source,
                                 int line_no, JobConfig& config);

// Blank lines are ignored. Every record must share the first record's (K, B).
Trace parse_trace(std::string_view text, const std::string& source);
Trace read_trace_file(const std::filesystem::path& path);
void write_trace_file(const std::filesystem::path& path, const JobConfig& config,
                      std::span<const IterationSample> samples);

struct Anchor {
  JobConfig config;
  double epochs = 0.0;
};

// {"anchors": [{"K": 8, "B": 384, "epochs": 81.5}], "dataset_size": 50000}
struct AnchorSet {
  std::vector<Anchor> anchors;
  std::optional<std::int64_t> dataset_size;
};

AnchorSet parse_anchors(std::string_view text, const std::string& source);
AnchorSet read_anchors_file(const std::filesystem::path& path);
void write_anchors_file(const std::filesystem::path& path, const AnchorSet& set);

/// Per-trace summary used by the fit, with residuals against the fitted model.
struct TraceSummary {
  JobConfig config;
  std::size_t samples = 0;
  double normalized_noise = 0.0;  // mean of raw noise / K
  double iteration_time_s = 0.0;  // mean compute + sync
  double noise_residual = 0.0;    // measured - fitted
  double time_residual = 0.0;
};

struct TraceFitReport {
  PerfModel model;
  std::vector<TraceSummary> traces;
  std::vector<std::string> flags;
};

// Noise from per-K fits averaged over K (pooled when no K has two batch
// sizes), epochs from the anchors at the fitted noise, step time from the
// (b, K) plane. Throws kDegenerateFit naming the axis that lacks variation.
TraceFitReport fit_traces(std::span<const Trace> traces, const AnchorSet& anchors,
                          std::int64_t dataset_size);

}  // namespace costtune

#endif  // COSTTUNE_TRACE_IO_HPP_
