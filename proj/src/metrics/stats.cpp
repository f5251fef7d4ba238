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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "bento/error.hpp"
#include "bento/metrics.hpp"

namespace bento {

std::size_t nearest_rank(std::size_t n, double q) {
  if (n == 0) raise(ErrorCode::kEmptySamples, "percentile of zero samples");
  if (!(q >= 0.0 && q <= 1.0)) {
    raise(ErrorCode::kInvalidValue, "percentile fraction " + std::to_string(q) + " not in [0, 1]");
  }
  if (q == 0.0) return 1;
  // The relative nudge absorbs representation error in q (0.07 * 100 must be
  // rank 7, not 8) without moving any rank whose exact value is non-integral.
  const double exact = q * static_cast<double>(n) * (1.0 - 1e-12);
  auto rank = static_cast<std::size_t>(std::ceil(exact));
  return std::clamp<std::size_t>(rank, 1, n);
}

double percentile(std::span<const double> samples, double q) {
  const std::size_t rank = nearest_rank(samples.size(), q);
  std::vector<double> scratch(samples.begin(), samples.end());
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

double percentile_sorted(std::span<const double> sorted, double q) {
  return sorted[nearest_rank(sorted.size(), q) - 1];
}

SummaryStatistics summarize(std::vector<double> values) {
  SummaryStatistics s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  long double sum = 0;
  for (double v : values) sum += v;
  s.mean = static_cast<double>(sum / static_cast<long double>(values.size()));
  s.min = values.front();
  s.max = values.back();
  s.p50 = percentile_sorted(values, 0.5);
  s.p99 = percentile_sorted(values, 0.99);
  return s;
}

Rate compute_throughput(double total_units, std::int64_t elapsed_ns, std::string_view unit) {
  if (elapsed_ns <= 0) {
    raise(ErrorCode::kZeroElapsed, "elapsed " + std::to_string(elapsed_ns) + " ns");
  }
  const long double rate =
      static_cast<long double>(total_units) * 1e9L / static_cast<long double>(elapsed_ns);
  return Rate{static_cast<double>(rate), std::string(unit) + "/s"};
}

std::string to_jsonl(const MetricSample& sample) {
  Json j = {{"metric", sample.metric},
            {"value", sample.value},
            {"unit", sample.unit},
            {"test_id", sample.test_id},
            {"wall_time_ns", sample.wall_time_ns}};
  return j.dump();
}

MetricSample parse_sample_line(std::string_view line, std::size_t line_no,
                               std::uint64_t default_test_id) {
  auto fail = [&](const std::string& why) -> MetricSample {
    raise(ErrorCode::kMalformedSample, "line " + std::to_string(line_no) + ": " + why);
  };
  Json j = Json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) return fail("not a JSON object");
  if (!j.is_object()) return fail("not a JSON object");
  auto metric = j.find("metric");
  auto value = j.find("value");
  auto unit = j.find("unit");
  if (metric == j.end() || !metric->is_string() || metric->get_ref<const std::string&>().empty()) {
    return fail("missing string field 'metric'");
  }
  if (value == j.end() || !value->is_number()) return fail("missing numeric field 'value'");
  if (unit == j.end() || !unit->is_string()) return fail("missing string field 'unit'");

  MetricSample s;
  s.metric = metric->get<std::string>();
  s.value = value->get<double>();
  if (!std::isfinite(s.value)) return fail("non-finite value");
  s.unit = unit->get<std::string>();
  s.test_id = default_test_id;
  if (auto it = j.find("test_id"); it != j.end()) {
    if (!it->is_number_unsigned()) return fail("field 'test_id' must be a non-negative integer");
    s.test_id = it->get<std::uint64_t>();
  }
  if (auto it = j.find("wall_time_ns"); it != j.end()) {
    if (!it->is_number_integer()) return fail("field 'wall_time_ns' must be an integer");
    s.wall_time_ns = it->get<std::int64_t>();
  }
  return s;
}

std::vector<MetricSample> read_samples(const std::filesystem::path& path,
                                       std::uint64_t default_test_id) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kMissingSamples, "cannot open " + path.string());
  std::vector<MetricSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_sample_line(line, line_no, default_test_id));
  }
  return out;
}

}  // namespace bento
