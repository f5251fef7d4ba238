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

#include <regex>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "stub_task.hpp"
#include "bento/executor.hpp"

namespace fs = std::filesystem;
using bento::ErrorCode;

namespace {

struct Fixture {
  testing::TempDir dir{"bento-exec"};
  std::shared_ptr<testing::Trace> trace = std::make_shared<testing::Trace>();
  bento::Registry registry;

  Fixture() {
    registry.add(testing::stub_descriptor("stub", trace, dir / "external"));
    registry.add(testing::stub_descriptor("other", trace, dir / "external"));
  }

  fs::path ws() const { return dir / "ws"; }

  bento::RunReport run(const std::string& text) {
    return bento::execute_box(bento::parse_box(text, registry), registry, ws());
  }
};

const char* kEightTests =
    R"({"tasks":[{"task_name":"stub","parameters":{"n":[1,2,3,4,5,6,7,8]},"metrics":["value","rate"]}]})";

}  // namespace

TEST_CASE("execute_box traces prepare, every run, report and never clean") {
  Fixture f;
  const auto report = f.run(kEightTests);
  CHECK(std::regex_match(f.trace->joined(), std::regex("prepare( run){8} report")));
  CHECK(report.rows.size() == 16);
  CHECK(bento::failed_test_count(report) == 0);
  CHECK(fs::exists(f.ws() / "report.json"));
  for (int id = 0; id < 8; ++id) {
    const auto d = f.ws() / "stub" / std::to_string(id);
    CHECK(fs::exists(d / "samples.jsonl"));
    CHECK(fs::exists(d / "meta.json"));
    CHECK(testing::load_json(d / "status.json")["ok"] == true);
    CHECK(testing::load_json(d / "params.json")["n"] == id + 1);
  }
}

TEST_CASE("each task of a box gets its own prepare and report") {
  Fixture f;
  f.run(R"({"tasks":[
    {"task_name":"stub","parameters":{"n":[1,2]},"metrics":["value"]},
    {"task_name":"other","parameters":{"n":[1,2,3]},"metrics":["value"]}]})");
  CHECK(f.trace->joined() == "prepare run run report prepare run run run report");
}

TEST_CASE("a failing test is recorded and the rest still run") {
  Fixture f;
  const auto report =
      f.run(R"({"tasks":[{"task_name":"stub","parameters":{"n":[1,2,3],"fail_at":[2]},"metrics":["value"]}]})");
  REQUIRE(report.rows.size() == 3);
  CHECK_FALSE(report.rows[0].failed);
  CHECK(report.rows[1].failed);
  CHECK(report.rows[1].error.find("RunFailed") != std::string::npos);
  CHECK_FALSE(report.rows[2].failed);
  CHECK(*report.rows[0].stats.mean == 1);
  CHECK(*report.rows[2].stats.mean == 3);
  CHECK(bento::failed_test_count(report) == 1);
}

TEST_CASE("a failing prepare flags every test without running them") {
  Fixture f;
  const auto report =
      f.run(R"({"tasks":[{"task_name":"stub","parameters":{"n":[1,2],"fail_prepare":[1]},"metrics":["value"]}]})");
  CHECK(f.trace->joined() == "prepare report");
  REQUIRE(report.rows.size() == 2);
  for (const auto& r : report.rows) {
    CHECK(r.failed);
    CHECK(r.error.find("PrepareFailed") != std::string::npos);
  }
}

TEST_CASE("rate metrics divide the counter sum by the elapsed time") {
  Fixture f;
  const auto report =
      f.run(R"({"tasks":[{"task_name":"stub","parameters":{"n":[4]},"metrics":["rate","value"]}]})");
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].metric == "rate");
  CHECK(*report.rows[0].stats.throughput == doctest::Approx(10 / 1e-3));
  CHECK(report.rows[0].unit == "items/s");
  CHECK(report.rows[1].unit == "units");
}

TEST_CASE("report.json re-aggregates and re-renders identically") {
  Fixture f;
  f.run(kEightTests);
  const std::string on_disk = testing::slurp(f.ws() / "report.json");
  const auto loaded = bento::report_from_json(nlohmann::json::parse(on_disk));
  CHECK(bento::render_report(loaded, bento::ReportFormat::kJson) == on_disk);

  const auto again = bento::aggregate(f.ws(), bento::parse_box(kEightTests, f.registry), f.registry);
  REQUIRE(again.rows.size() == loaded.rows.size());
  for (std::size_t i = 0; i < again.rows.size(); ++i) {
    CHECK(again.rows[i].metric == loaded.rows[i].metric);
    CHECK(again.rows[i].stats.mean == loaded.rows[i].stats.mean);
    CHECK(again.rows[i].stats.throughput == loaded.rows[i].stats.throughput);
  }
}

TEST_CASE("clean removes task state and artifacts and is idempotent") {
  Fixture f;
  f.run(kEightTests);
  CHECK(fs::exists(f.dir / "external" / "marker-stub"));
  const std::vector<std::string> names{"stub"};
  f.trace->events.clear();

  bento::clean(f.registry, names, f.ws());
  const auto after_one = oracle::directory_digest(f.ws());
  CHECK_FALSE(fs::exists(f.ws() / "stub"));
  CHECK_FALSE(fs::exists(f.dir / "external" / "marker-stub"));
  CHECK(fs::exists(f.ws() / "report.json"));

  bento::clean(f.registry, names, f.ws());
  CHECK(oracle::directory_digest(f.ws()) == after_one);
  CHECK(f.trace->joined() == "clean clean");

  std::vector<std::string> left;
  for (const auto& e : fs::directory_iterator(f.ws())) left.push_back(e.path().filename().string());
  CHECK(left == std::vector<std::string>{"report.json"});
}

TEST_CASE("clean of a never-run task succeeds") {
  Fixture f;
  const std::vector<std::string> names{"stub", "other"};
  CHECK_NOTHROW(bento::clean(f.registry, names, f.ws()));
}

TEST_CASE("clean with an unknown name cleans nothing") {
  Fixture f;
  f.run(kEightTests);
  const std::vector<std::string> names{"stub", "nope"};
  try {
    bento::clean(f.registry, names, f.ws());
    FAIL("expected UnknownTask");
  } catch (const bento::Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownTask);
  }
  CHECK(fs::exists(f.ws() / "stub"));
}

TEST_CASE("registering a duplicate task name fails") {
  Fixture f;
  try {
    f.registry.add(testing::stub_descriptor("stub", f.trace, f.dir / "x"));
    FAIL("expected DuplicateTask");
  } catch (const bento::Error& e) {
    CHECK(e.code() == ErrorCode::kDuplicateTask);
  }
}
