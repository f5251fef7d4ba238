// Copyright 2026 The Bento Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bento/schema.hpp"

namespace bento {

/// One timed observation, serialized as one line of samples.jsonl.
struct MetricSample {
  std::string metric;
  double value = 0.0;
  std::string unit;
  std::uint64_t test_id = 0;
  std::int64_t wall_time_ns = 0;  // offset from the test's start on the monotonic clock
};

/// Compact single-line JSON, keys sorted, no trailing newline.
std::string to_jsonl(const MetricSample& sample);
/// Parses one samples.jsonl line. `metric`, `value` and `unit` are required;
/// `test_id` and `wall_time_ns` default to the supplied values. Throws
/// MalformedSample naming `line_no` otherwise, or when the value is not finite.
MetricSample parse_sample_line(std::string_view line, std::size_t line_no,
                               std::uint64_t default_test_id = 0);
/// Reads a whole samples.jsonl file (blank lines skipped).
std::vector<MetricSample> read_samples(const std::filesystem::path& path,
                                       std::uint64_t default_test_id = 0);

struct SummaryStatistics {
  std::uint64_t count = 0;
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> p50;
  std::optional<double> p99;
  std::optional<double> throughput;
};

/// 1-based nearest rank ceil(q * n), clamped to [1, n]. q = 0 gives 1.
std::size_t nearest_rank(std::size_t n, double q);

/// Nearest-rank percentile. Throws EmptySamples on an empty input and
/// InvalidValue when q is outside [0, 1].
double percentile(std::span<const double> samples, double q);

/// Same, for input already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double q);

/// count/mean/min/max/p50/p99 over `values` (reordered in place). An empty
/// input yields count 0 and every field empty.
SummaryStatistics summarize(std::vector<double> values);

struct Rate {
  double value = 0.0;
  std::string unit;  // "<unit>/s"
};

/// total_units / elapsed seconds. Throws ZeroElapsed when elapsed_ns <= 0.
Rate compute_throughput(double total_units, std::int64_t elapsed_ns, std::string_view unit);

/// How a requested metric is materialized from the raw sample log.
enum class MetricClass {
  kDistribution,  // summary statistics over every sample named `source`
  kRate,          // sum of `source` counters divided by the test's elapsed_ns
};

struct MetricSpec {
  std::string name;
  MetricClass metric_class = MetricClass::kDistribution;
  std::string source;
  /// Unit label reported to the user. Empty means "take it from the samples".
  std::string unit;
  /// Applied to the aggregated value (e.g. bytes/s -> Gbps).
  double scale = 1.0;
  std::string description;
};

/// Name of the per-test wall elapsed counter every rate metric divides by.
inline constexpr std::string_view kElapsedMetric = "elapsed_ns";

struct ReportRow {
  std::string task;
  std::uint64_t test_id = 0;
  Json params = Json::object();
  std::string metric;
  SummaryStatistics stats;
  std::string unit;
  std::optional<double> total;  // rate metrics: sum of the counter samples
  bool failed = false;
  std::string error;
  Json meta = Json::object();
};

struct RunReport {
  static constexpr int kSchemaVersion = 1;
  int schema = kSchemaVersion;
  std::string start_time;
  std::string host;
  std::string harness_version;
  Json metadata = Json::object();
  std::vector<ReportRow> rows;
};

/// Materializes one row per requested metric for one test from the logs in
/// `test_dir` (samples.jsonl, status.json, meta.json). A missing log yields
/// rows flagged MissingSamples, never an exception.
std::vector<ReportRow> aggregate_test(const std::filesystem::path& test_dir,
                                      const std::string& task, std::uint64_t test_id,
                                      const Json& params,
                                      std::span<const std::string> requested,
                                      std::span<const MetricSpec> specs);

/// Number of distinct failed tests.
std::size_t failed_test_count(const RunReport& report);

enum class ReportFormat { kTable, kCsv, kJson };

std::optional<ReportFormat> parse_report_format(std::string_view name);
Json to_json(const RunReport& report);
RunReport report_from_json(const Json& json);
/// json is canonical (sorted keys, 2-space indent, trailing newline) and
/// re-renders byte-identically after a parse; csv follows RFC 4180.
std::string render_report(const RunReport& report, ReportFormat format);

}  // namespace bento
