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

#include "bento/task.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "bento/error.hpp"
#include "bento/rng.hpp"
#include "bento/util.hpp"

namespace fs = std::filesystem;

namespace bento {

SampleRecorder::SampleRecorder(std::uint64_t test_id, std::int64_t origin_ns,
                               std::size_t reservoir_cap)
    : test_id_(test_id), origin_ns_(origin_ns), reservoir_cap_(std::max<std::size_t>(1, reservoir_cap)) {}

void SampleRecorder::record(std::string_view metric, double value, std::string_view unit) {
  record_at(metric, value, unit, now_ns());
}

void SampleRecorder::record_at(std::string_view metric, double value, std::string_view unit,
                               std::int64_t at_ns) {
  samples_.push_back(MetricSample{std::string(metric), value, std::string(unit), test_id_,
                                  at_ns - origin_ns_});
}

void SampleRecorder::record_series(std::string_view metric, std::string_view unit,
                                   std::span<const TimedValue> points) {
  if (points.size() <= reservoir_cap_) {
    samples_.reserve(samples_.size() + points.size());
    for (const auto& p : points) record_at(metric, p.value, unit, p.at_ns);
    return;
  }
  // Algorithm R over the series, seeded by the test so reports reproduce.
  std::vector<std::size_t> keep(reservoir_cap_);
  for (std::size_t i = 0; i < reservoir_cap_; ++i) keep[i] = i;
  Xorshift64Star rng(mix64(test_id_) ^ fnv1a(metric));
  for (std::size_t i = reservoir_cap_; i < points.size(); ++i) {
    const std::uint64_t j = rng.below(i + 1);
    if (j < reservoir_cap_) keep[j] = i;
  }
  std::sort(keep.begin(), keep.end());
  for (std::size_t i : keep) record_at(metric, points[i].value, unit, points[i].at_ns);
  meta_["reservoir"][std::string(metric)] = {{"observed", points.size()},
                                             {"kept", reservoir_cap_}};
}

TaskContext::TaskContext(fs::path workspace, std::string task_name, RunOptions options)
    : workspace_(std::move(workspace)), task_name_(std::move(task_name)), options_(std::move(options)) {}

void TaskContext::register_artifact(const fs::path& path) const {
  fs::create_directories(task_dir());
  const auto existing = artifacts();
  const fs::path abs = fs::absolute(path);
  if (std::find(existing.begin(), existing.end(), abs) != existing.end()) return;
  std::ofstream out(task_dir() / "artifacts.txt", std::ios::app);
  if (!out) raise(ErrorCode::kWorkspace, "cannot record artifact in " + task_dir().string());
  out << abs.string() << '\n';
}

std::vector<fs::path> TaskContext::artifacts() const {
  std::vector<fs::path> out;
  std::ifstream in(task_dir() / "artifacts.txt");
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

void TaskContext::log(std::string_view message) const {
  if (options_.log) {
    options_.log(message);
  } else if (options_.verbose) {
    std::cerr << "[" << task_name_ << "] " << message << '\n';
  }
}

std::vector<ReportRow> Task::report(TaskContext& ctx, std::span<const TestCase> tests,
                                    std::span<const MetricSpec> metrics) {
  std::vector<ReportRow> rows;
  for (const auto& t : tests) {
    auto part = aggregate_test(ctx.test_dir(t.test_id), t.task_name, t.test_id, t.params_json(),
                               t.metrics, metrics);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

Json TaskDescriptor::to_json() const {
  Json metric_list = Json::array();
  for (const auto& m : metrics) {
    metric_list.push_back({{"name", m.name},
                           {"class", m.metric_class == MetricClass::kRate ? "rate" : "distribution"},
                           {"unit", m.unit},
                           {"description", m.description}});
  }
  Json j = {{"name", name},
            {"summary", summary},
            {"kind", kind == TaskKind::kBuiltin ? "builtin" : "plugin"},
            {"parameters", schema.to_json()},
            {"metrics", std::move(metric_list)}};
  if (kind == TaskKind::kPlugin) j["plugin_dir"] = plugin_dir.string();
  return j;
}

}  // namespace bento
