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

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "bento/error.hpp"
#include "bento/registry.hpp"
#include "bento/task.hpp"

namespace testing {

/// Phase trace shared by every StubTask created from one descriptor.
struct Trace {
  std::vector<std::string> events;
  std::string joined() const {
    std::string out;
    for (const auto& e : events) out += (out.empty() ? "" : " ") + e;
    return out;
  }
};

/// Records its phases. Parameters: n (integer), fail_at (run throws for
/// that n), fail_prepare (0/1). Samples: value = n, one "count" of 10 per
/// test and an elapsed_ns of 1 ms. Prepare creates `external`/marker-<task>
/// and registers it as an artifact.
class StubTask final : public bento::Task {
 public:
  StubTask(std::shared_ptr<Trace> trace, std::filesystem::path external)
      : trace_(std::move(trace)), external_(std::move(external)) {}

  void prepare(bento::TaskContext& ctx, std::span<const bento::TestCase> tests) override {
    trace_->events.push_back("prepare");
    if (!tests.empty() && tests.front().get_int("fail_prepare", 0) != 0) {
      bento::raise(bento::ErrorCode::kInvalidParameter, "stub prepare refused");
    }
    std::filesystem::create_directories(external_);
    const auto marker = external_ / ("marker-" + ctx.task_name());
    std::ofstream(marker) << "x";
    ctx.register_artifact(marker);
  }

  void run(bento::TaskContext&, const bento::TestCase& t, bento::SampleRecorder& out) override {
    trace_->events.push_back("run");
    const auto n = t.get_int("n", 0);
    if (n == t.get_int("fail_at", -1)) bento::raise(bento::ErrorCode::kInvalidParameter, "stub run refused");
    out.record("value", static_cast<double>(n), "units");
    out.record("count", 10, "items");
    out.record(bento::kElapsedMetric, 1e6, "ns");
    out.meta()["n"] = n;
  }

  std::vector<bento::ReportRow> report(bento::TaskContext& ctx, std::span<const bento::TestCase> tests,
                                       std::span<const bento::MetricSpec> metrics) override {
    trace_->events.push_back("report");
    return Task::report(ctx, tests, metrics);
  }

  void clean(bento::TaskContext&) override { trace_->events.push_back("clean"); }

 private:
  std::shared_ptr<Trace> trace_;
  std::filesystem::path external_;
};

inline bento::TaskDescriptor stub_descriptor(const std::string& name, std::shared_ptr<Trace> trace,
                                             const std::filesystem::path& external) {
  bento::TaskDescriptor d;
  d.name = name;
  d.summary = "instrumented stub";
  d.schema = bento::ParameterSchema({bento::ParameterSpec::integer("n", 0, 1000, 0),
                                     bento::ParameterSpec::integer("fail_at", -1, 1000, -1),
                                     bento::ParameterSpec::integer("fail_prepare", 0, 1, 0)});
  d.metrics = {{"value", bento::MetricClass::kDistribution, "value", "", 1.0, "n"},
               {"rate", bento::MetricClass::kRate, "count", "items/s", 1.0, "count per second"}};
  d.factory = [trace, external] { return std::make_unique<StubTask>(trace, external); };
  return d;
}

}  // namespace testing
