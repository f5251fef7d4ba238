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

#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "bento/box.hpp"
#include "bento/error.hpp"
#include "bento/metrics.hpp"
#include "bento/registry.hpp"

namespace {

// One row per (test, metric) of the example sweep, with made-up numbers.
bento::RunReport sweep_report() {
  const auto reg = bento::Registry::with_builtins();
  const auto tests = bento::expand_box(bento::parse_box(testing::kSweepBox, reg), reg);
  bento::RunReport report;
  report.start_time = "2026-01-01T00:00:00Z";
  report.host = "host";
  report.harness_version = "test";
  for (const auto& t : tests) {
    for (const auto& m : t.metrics) {
      bento::ReportRow r;
      r.task = t.task_name;
      r.test_id = t.test_id;
      r.params = t.params_json();
      r.metric = m;
      r.stats.count = 3;
      r.stats.mean = 1.5 + static_cast<double>(t.test_id);
      r.stats.p50 = 1.0;
      r.stats.p99 = 2.0;
      r.unit = "ns";
      if (m == "bandwidth" || m == "throughput") {
        r.stats = {};
        r.stats.count = 1;
        r.stats.throughput = 0.1 * static_cast<double>(t.test_id + 1);
        r.total = 42;
      }
      report.rows.push_back(r);
    }
  }
  return report;
}

std::vector<std::string> split_lines(const std::string& s, const std::string& eol) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t end = s.find(eol, pos);
    REQUIRE(end != std::string::npos);
    out.push_back(s.substr(pos, end - pos));
    pos = end + eol.size();
  }
  return out;
}

}  // namespace

TEST_CASE("the sweep report has 27 rows over 11 tests") {
  const auto report = sweep_report();
  CHECK(report.rows.size() == 27);
  std::set<std::uint64_t> ids;
  for (const auto& r : report.rows) ids.insert(r.test_id);
  CHECK(ids.size() == 11);
}

TEST_CASE("table rendering: header, rule, one line per row") {
  const auto text = bento::render_report(sweep_report(), bento::ReportFormat::kTable);
  const auto lines = split_lines(text, "\n");
  REQUIRE(lines.size() == 2 + 27);
  CHECK(lines[0].rfind("TASK", 0) == 0);
  CHECK(lines[1].find_first_not_of('-') == std::string::npos);
  CHECK(lines[2].rfind("net_tcp", 0) == 0);
  CHECK(lines.back().rfind("pred_pushdown", 0) == 0);
}

TEST_CASE("csv rendering uses CRLF and one record per row") {
  auto report = sweep_report();
  report.rows[0].unit = "a,b \"quoted\"";
  const auto text = bento::render_report(report, bento::ReportFormat::kCsv);
  const auto lines = split_lines(text, "\r\n");
  REQUIRE(lines.size() == 1 + 27);
  CHECK(lines[0].rfind("task,test_id,", 0) == 0);
  CHECK(lines[0].find("param:data_size") != std::string::npos);
  CHECK(lines[1].find(R"("a,b ""quoted""")") != std::string::npos);
  for (const auto& l : lines) CHECK(l.find('\n') == std::string::npos);
}

TEST_CASE("json rendering round-trips") {
  const auto report = sweep_report();
  const auto text = bento::render_report(report, bento::ReportFormat::kJson);
  const auto back = bento::report_from_json(nlohmann::json::parse(text));
  CHECK(bento::render_report(back, bento::ReportFormat::kJson) == text);
  REQUIRE(back.rows.size() == report.rows.size());
  CHECK(back.rows[2].stats.throughput == report.rows[2].stats.throughput);
  CHECK_FALSE(back.rows[2].stats.mean.has_value());
  CHECK(back.rows[0].params == report.rows[0].params);
}

TEST_CASE("failed rows are counted per test and shown in the table") {
  auto report = sweep_report();
  report.rows[0].failed = true;
  report.rows[0].error = "RunFailed(0): boom";
  report.rows[1].failed = true;
  report.rows[26].failed = true;
  CHECK(bento::failed_test_count(report) == 2);
  const auto text = bento::render_report(report, bento::ReportFormat::kTable);
  CHECK(text.find("FAILED: RunFailed(0): boom") != std::string::npos);
}

TEST_CASE("report schema version is checked") {
  auto j = bento::to_json(sweep_report());
  j["schema"] = 99;
  try {
    bento::report_from_json(j);
    FAIL("expected a schema error");
  } catch (const bento::Error& e) {
    CHECK(e.code() == bento::ErrorCode::kSyntax);
  }
}

TEST_CASE("format names") {
  CHECK(bento::parse_report_format("csv") == bento::ReportFormat::kCsv);
  CHECK(bento::parse_report_format("json") == bento::ReportFormat::kJson);
  CHECK(bento::parse_report_format("table") == bento::ReportFormat::kTable);
  CHECK_FALSE(bento::parse_report_format("xml").has_value());
}
