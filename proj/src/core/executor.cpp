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

#include "bento/executor.hpp"

#include <fstream>

#include "bento/error.hpp"
#include "bento/util.hpp"

namespace fs = std::filesystem;

namespace bento {

namespace {

void write_samples(const fs::path& path, std::span<const MetricSample> samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kWorkspace, "cannot write " + path.string());
  for (const auto& s : samples) out << to_jsonl(s) << '\n';
  if (!out) raise(ErrorCode::kWorkspace, "short write to " + path.string());
}

void write_status(const fs::path& dir, bool ok, const std::string& error) {
  write_file_atomic(dir / "status.json", Json{{"ok", ok}, {"error", error}}.dump() + "\n");
}

std::vector<ReportRow> failed_rows(std::span<const TestCase> tests, const std::string& error) {
  std::vector<ReportRow> rows;
  for (const auto& t : tests) {
    for (const auto& m : t.metrics) {
      ReportRow r;
      r.task = t.task_name;
      r.test_id = t.test_id;
      r.params = t.params_json();
      r.metric = m;
      r.failed = true;
      r.error = error;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::string describe(const std::exception& e) { return e.what(); }

void run_invocation(const TaskInvocation& inv, std::span<const TestCase> tests,
                    const TaskDescriptor& desc, const fs::path& workspace,
                    const RunOptions& options, RunReport& report) {
  TaskContext ctx(workspace, inv.task_name, options);
  fs::create_directories(ctx.task_dir());
  std::unique_ptr<Task> task = desc.factory();

  std::string prepare_error;
  try {
    ctx.log("prepare (" + std::to_string(tests.size()) + " tests)");
    task->prepare(ctx, tests);
  } catch (const std::exception& e) {
    prepare_error = std::string(to_string(ErrorCode::kPrepareFailed)) + ": " + describe(e);
    ctx.log(prepare_error);
  }

  for (const auto& test : tests) {
    const fs::path dir = ctx.test_dir(test.test_id);
    fs::create_directories(dir);
    write_file_atomic(dir / "params.json", test.params_json().dump() + "\n");
    if (!prepare_error.empty()) {
      write_status(dir, false, prepare_error);
      continue;
    }
    SampleRecorder recorder(test.test_id, now_ns(), options.reservoir_cap);
    std::string error;
    try {
      ctx.log("run test " + std::to_string(test.test_id) + " " + test.params_json().dump());
      task->run(ctx, test, recorder);
    } catch (const std::exception& e) {
      error = std::string(to_string(ErrorCode::kRunFailed)) + "(" +
              std::to_string(test.test_id) + "): " + describe(e);
      ctx.log(error);
    }
    write_samples(dir / "samples.jsonl", recorder.samples());
    write_file_atomic(dir / "meta.json", recorder.meta().dump() + "\n");
    write_status(dir, error.empty(), error);
  }

  std::vector<ReportRow> rows;
  try {
    rows = task->report(ctx, tests, desc.metrics);
  } catch (const std::exception& e) {
    rows = failed_rows(tests, std::string(to_string(ErrorCode::kReportFailed)) + ": " + describe(e));
  }
  report.rows.insert(report.rows.end(), std::make_move_iterator(rows.begin()),
                     std::make_move_iterator(rows.end()));
}

}  // namespace

RunReport execute_box(const MeasurementBox& box, const Registry& registry,
                      const fs::path& workspace, const RunOptions& options) {
  std::error_code ec;
  fs::create_directories(workspace, ec);
  if (ec) raise(ErrorCode::kWorkspace, workspace.string() + ": " + ec.message());

  RunReport report;
  report.start_time = iso8601_utc_now();
  report.host = hostname();
  report.harness_version = kHarnessVersion;
  report.metadata = {{"workspace", fs::absolute(workspace).string()},
                     {"cpus", available_cpus()},
                     {"reservoir_cap", options.reservoir_cap}};

  std::uint64_t next_id = 0;
  for (const auto& inv : box.tasks) {
    const TaskDescriptor& desc = registry.at(inv.task_name);
    const auto tests = expand_tests(inv, desc.schema, next_id);
    next_id += tests.size();
    run_invocation(inv, tests, desc, workspace, options, report);
  }

  write_file_atomic(workspace / kReportFileName, render_report(report, ReportFormat::kJson));
  return report;
}

void clean(const Registry& registry, std::span<const std::string> task_names,
           const fs::path& workspace, const RunOptions& options) {
  for (const auto& name : task_names) registry.at(name);

  std::vector<std::string> failures;
  for (const auto& name : task_names) {
    const TaskDescriptor& desc = registry.at(name);
    TaskContext ctx(workspace, name, options);
    try {
      desc.factory()->clean(ctx);
      for (const auto& artifact : ctx.artifacts()) {
        std::error_code ec;
        fs::remove_all(artifact, ec);
        if (ec) raise(ErrorCode::kIo, "remove " + artifact.string() + ": " + ec.message());
      }
      std::error_code ec;
      fs::remove_all(ctx.task_dir(), ec);
      if (ec) raise(ErrorCode::kIo, "remove " + ctx.task_dir().string() + ": " + ec.message());
    } catch (const std::exception& e) {
      failures.push_back(name + ": " + e.what());
    }
  }
  if (!failures.empty()) {
    std::string joined;
    for (const auto& f : failures) joined += (joined.empty() ? "" : "; ") + f;
    raise(ErrorCode::kCleanFailed, joined);
  }
}

std::vector<const TaskDescriptor*> list_tasks(const Registry& registry) { return registry.list(); }

RunReport aggregate(const fs::path& workspace, const MeasurementBox& box, const Registry& registry) {
  RunReport report;
  report.start_time = iso8601_utc_now();
  report.host = hostname();
  report.harness_version = kHarnessVersion;
  std::uint64_t next_id = 0;
  for (const auto& inv : box.tasks) {
    const TaskDescriptor& desc = registry.at(inv.task_name);
    TaskContext ctx(workspace, inv.task_name);
    for (const auto& t : expand_tests(inv, desc.schema, next_id)) {
      auto rows = aggregate_test(ctx.test_dir(t.test_id), t.task_name, t.test_id,
                                 t.params_json(), t.metrics, desc.metrics);
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
      ++next_id;
    }
  }
  return report;
}

}  // namespace bento
