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

#include <map>
#include <thread>

#include "bento/compute.hpp"
#include "bento/error.hpp"
#include "bento/tasks.hpp"
#include "bento/util.hpp"

namespace bento::tasks {

namespace {

using namespace bento::compute;

constexpr std::int64_t kCalibrationTargetNs = 200'000'000;

struct Plan {
  bool is_string = false;
  ArithmeticParams arith;
  StringParams str;
  bool calibrate = false;
};

Plan plan_for(const TestCase& t) {
  Plan plan;
  const std::string& op_name = t.get_string("operation");
  const bool has_type = t.has("data_type");
  const bool has_size = t.has("string_size");
  const auto seed = static_cast<std::uint64_t>(t.get_int("seed", 42));
  const std::int64_t iterations = t.get_int("iterations", 0);
  plan.calibrate = !t.has("iterations");

  if (auto op = parse_arith_op(op_name)) {
    if (!has_type || has_size) {
      raise(ErrorCode::kInvalidCombination,
            "arithmetic operation '" + op_name + "' needs data_type and no string_size");
    }
    plan.arith = {*parse_data_type(t.get_string("data_type")), *op,
                  static_cast<std::uint64_t>(iterations), seed};
  } else if (auto sop = parse_string_op(op_name)) {
    if (!has_size || has_type) {
      raise(ErrorCode::kInvalidCombination,
            "string operation '" + op_name + "' needs string_size and no data_type");
    }
    plan.is_string = true;
    plan.str = {static_cast<std::size_t>(t.get_int("string_size")), *sop,
                static_cast<std::uint64_t>(iterations), seed};
  } else {
    raise(ErrorCode::kInvalidCombination, "unknown operation '" + op_name + "'");
  }
  if (!plan.calibrate && iterations < 1) {
    raise(ErrorCode::kEmptyWorkload, "iterations must be >= 1");
  }
  return plan;
}

class ComputeTask final : public Task {
 public:
  void prepare(TaskContext& ctx, std::span<const TestCase> tests) override {
    for (const auto& t : tests) {
      if (!t.has("string_size")) continue;
      corpus_for(static_cast<std::size_t>(t.get_int("string_size")),
                 static_cast<std::uint64_t>(t.get_int("seed", 42)));
    }
    ctx.log("prepared " + std::to_string(corpora_.size()) + " string corpora");
  }

  void run(TaskContext&, const TestCase& test, SampleRecorder& out) override {
    Plan plan = plan_for(test);
    const StringCorpus* corpus =
        plan.is_string ? &corpus_for(plan.str.string_size, plan.str.seed) : nullptr;

    ComputeOutcome outcome;
    bool pinned = false;
    std::exception_ptr failure;
    // Measure on a dedicated thread so pinning never leaks into the harness.
    std::thread worker([&] {
      try {
        pinned = pin_current_thread(0);
        if (plan.is_string) {
          if (plan.calibrate) {
            plan.str.iterations = calibrate_iterations(
                [&](std::uint64_t n) {
                  StringParams p = plan.str;
                  p.iterations = n;
                  return run_string(p, *corpus).elapsed_ns;
                },
                kCalibrationTargetNs);
          }
          outcome = run_string(plan.str, *corpus);
        } else {
          if (plan.calibrate) {
            plan.arith.iterations = calibrate_iterations(
                [&](std::uint64_t n) {
                  ArithmeticParams p = plan.arith;
                  p.iterations = n;
                  return run_arithmetic(p).elapsed_ns;
                },
                kCalibrationTargetNs);
          }
          outcome = run_arithmetic(plan.arith);
        }
      } catch (...) {
        failure = std::current_exception();
      }
    });
    worker.join();
    if (failure) std::rethrow_exception(failure);

    out.record("ops_done", static_cast<double>(outcome.ops_completed), "ops");
    out.record(kElapsedMetric, static_cast<double>(outcome.elapsed_ns), "ns");
    out.meta()["iterations"] = outcome.ops_completed;
    out.meta()["checksum"] = hex64(outcome.checksum);
    out.meta()["calibrated"] = plan.calibrate;
    out.meta()["pinned"] = pinned;
  }

  std::vector<ReportRow> report(TaskContext& ctx, std::span<const TestCase> tests,
                                std::span<const MetricSpec> metrics) override {
    std::vector<ReportRow> rows = Task::report(ctx, tests, metrics);
    for (const auto& t : tests) {
      verify_checksum(t, rows);
    }
    return rows;
  }

  void clean(TaskContext&) override {}

 private:
  const StringCorpus& corpus_for(std::size_t size, std::uint64_t seed) {
    auto key = std::make_pair(size, seed);
    auto it = corpora_.find(key);
    if (it == corpora_.end()) it = corpora_.emplace(key, StringCorpus(size, seed)).first;
    return it->second;
  }

  void verify_checksum(const TestCase& t, std::vector<ReportRow>& rows) {
    ReportRow* first = nullptr;
    for (auto& r : rows) {
      if (r.test_id == t.test_id && !r.failed) {
        first = &r;
        break;
      }
    }
    if (first == nullptr || !first->meta.contains("checksum")) return;
    Plan plan = plan_for(t);
    const auto iterations = first->meta.value("iterations", std::uint64_t{0});
    std::uint64_t expected;
    if (plan.is_string) {
      plan.str.iterations = iterations;
      expected = reference_string(plan.str, corpus_for(plan.str.string_size, plan.str.seed));
    } else {
      plan.arith.iterations = iterations;
      expected = reference_arithmetic(plan.arith);
    }
    const bool ok = first->meta["checksum"].get<std::string>() == hex64(expected);
    for (auto& r : rows) {
      if (r.test_id != t.test_id) continue;
      r.meta["checksum_verified"] = ok;
      if (!ok) {
        r.failed = true;
        r.error = std::string(to_string(ErrorCode::kChecksumMismatch)) + ": reference " +
                  hex64(expected);
      }
    }
  }

  std::map<std::pair<std::size_t, std::uint64_t>, StringCorpus> corpora_;
};

}  // namespace

TaskDescriptor compute_descriptor() {
  TaskDescriptor d;
  d.name = "compute";
  d.summary = "single-core throughput of arithmetic and string operations";
  d.schema = ParameterSchema({
      ParameterSpec::enumeration("data_type", {"int8", "int128", "fp64", "float64"})
          .describe("numeric type for add/sub/mul/div"),
      ParameterSpec::size("string_size", 1, 1 << 20).describe("string length for cmp/cat/xfrm"),
      ParameterSpec::enumeration("operation", {"add", "sub", "mul", "div", "cmp", "cat", "xfrm"})
          .require(),
      ParameterSpec::integer("iterations", 0, INT64_MAX)
          .describe("operations to execute; calibrated to >= 200 ms when omitted"),
      ParameterSpec::integer("seed", 0, INT64_MAX, 42),
  });
  d.metrics = {{"throughput", MetricClass::kRate, "ops_done", "ops/s", 1.0, "operations per second"}};
  d.factory = [] { return std::make_unique<ComputeTask>(); };
  return d;
}

}  // namespace bento::tasks
