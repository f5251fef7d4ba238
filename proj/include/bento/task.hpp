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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bento/box.hpp"
#include "bento/metrics.hpp"
#include "bento/schema.hpp"

namespace bento {

struct RunOptions {
  /// Per-phase wall limit for plugin child processes.
  std::chrono::milliseconds plugin_timeout{std::chrono::hours(1)};
  /// Latency samples kept per series per test; beyond this a uniform
  /// reservoir is retained.
  std::size_t reservoir_cap = 10'000'000;
  bool verbose = false;
  std::function<void(std::string_view)> log;
};

/// A latency-style observation stamped with the absolute monotonic time at
/// which it completed.
struct TimedValue {
  double value = 0.0;
  std::int64_t at_ns = 0;
};

/// Collects the samples of one test. Not thread-safe: workers keep their own
/// buffers and hand them over after joining.
class SampleRecorder {
 public:
  SampleRecorder(std::uint64_t test_id, std::int64_t origin_ns, std::size_t reservoir_cap);

  void record(std::string_view metric, double value, std::string_view unit);
  void record_at(std::string_view metric, double value, std::string_view unit,
                 std::int64_t at_ns);
  /// Records a whole series; keeps a seeded uniform reservoir of
  /// reservoir_cap points when the series is longer.
  void record_series(std::string_view metric, std::string_view unit,
                     std::span<const TimedValue> points);

  std::span<const MetricSample> samples() const noexcept { return samples_; }
  Json& meta() noexcept { return meta_; }
  const Json& meta() const noexcept { return meta_; }
  std::uint64_t test_id() const noexcept { return test_id_; }
  std::int64_t origin_ns() const noexcept { return origin_ns_; }

 private:
  std::uint64_t test_id_;
  std::int64_t origin_ns_;
  std::size_t reservoir_cap_;
  std::vector<MetricSample> samples_;
  Json meta_ = Json::object();
};

/// Per-task view of the workspace: `<workspace>/<task>/<test_id>/`.
class TaskContext {
 public:
  TaskContext(std::filesystem::path workspace, std::string task_name, RunOptions options = {});

  const std::filesystem::path& workspace() const noexcept { return workspace_; }
  const std::string& task_name() const noexcept { return task_name_; }
  std::filesystem::path task_dir() const { return workspace_ / task_name_; }
  std::filesystem::path test_dir(std::uint64_t test_id) const {
    return task_dir() / std::to_string(test_id);
  }
  const RunOptions& options() const noexcept { return options_; }

  /// Records a path outside task_dir() that clean must delete. Persisted in
  /// task_dir()/artifacts.txt so a later process can clean it.
  void register_artifact(const std::filesystem::path& path) const;
  std::vector<std::filesystem::path> artifacts() const;

  void log(std::string_view message) const;

 private:
  std::filesystem::path workspace_;
  std::string task_name_;
  RunOptions options_;
};

/// The four-phase lifecycle. One Task object is created per box execution
/// (or per clean), so it may hold state such as loopback servers between
/// prepare and report; destroying it releases that state.
class Task {
 public:
  virtual ~Task() = default;

  /// Called once, before the first test of the task.
  virtual void prepare(TaskContext& ctx, std::span<const TestCase> tests) = 0;
  virtual void run(TaskContext& ctx, const TestCase& test, SampleRecorder& out) = 0;
  /// Default: aggregate_test over every test's log directory.
  virtual std::vector<ReportRow> report(TaskContext& ctx, std::span<const TestCase> tests,
                                        std::span<const MetricSpec> metrics);
  /// Removes task state outside the workspace. Must succeed when nothing
  /// was ever prepared. The harness deletes task_dir() afterwards.
  virtual void clean(TaskContext& ctx) = 0;
};

enum class TaskKind { kBuiltin, kPlugin };

struct TaskDescriptor {
  std::string name;
  std::string summary;
  ParameterSchema schema;
  std::vector<MetricSpec> metrics;
  TaskKind kind = TaskKind::kBuiltin;
  std::function<std::unique_ptr<Task>()> factory;
  std::filesystem::path plugin_dir;  // plugins only

  Json to_json() const;
};

}  // namespace bento
