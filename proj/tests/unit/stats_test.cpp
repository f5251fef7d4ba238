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
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "bento/error.hpp"
#include "bento/metrics.hpp"
#include "bento/task.hpp"

using bento::ErrorCode;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const bento::Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

}  // namespace

TEST_CASE("nearest rank matches the integer definition") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t n = 1 + gen() % 5000;
    const unsigned pct = static_cast<unsigned>(gen() % 101);
    CAPTURE(n);
    CAPTURE(pct);
    CHECK(bento::nearest_rank(n, pct / 100.0) == oracle::nearest_rank(n, pct));
  }
}

TEST_CASE("percentile equals the sort-based oracle") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int v = 0; v < 1000; ++v) {
    std::vector<double> xs(1 + gen() % 700);
    for (auto& x : xs) x = (gen() % 4 == 0) ? std::floor(dist(gen) / 1000) : dist(gen);
    for (unsigned pct : {0u, 50u, 90u, 99u, 100u}) {
      CHECK(bento::percentile(xs, pct / 100.0) == oracle::percentile(xs, pct));
    }
  }
}

TEST_CASE("percentile of q = 0 and q = 1 are the extremes") {
  const std::vector<double> xs{5, 1, 9, 3};
  CHECK(bento::percentile(xs, 0.0) == 1);
  CHECK(bento::percentile(xs, 1.0) == 9);
  CHECK(bento::percentile(xs, 0.5) == 3);
}

TEST_CASE("percentile rejects empty input and bad fractions") {
  const std::vector<double> none;
  const std::vector<double> one{1.0};
  CHECK(code_of([&] { bento::percentile(none, 0.5); }) == ErrorCode::kEmptySamples);
  CHECK(code_of([&] { bento::percentile(one, 1.5); }) == ErrorCode::kInvalidValue);
  CHECK(code_of([&] { bento::percentile(one, -0.1); }) == ErrorCode::kInvalidValue);
}

TEST_CASE("summary statistics") {
  const auto s = bento::summarize({4, 1, 3, 2});
  CHECK(s.count == 4);
  CHECK(*s.mean == doctest::Approx(2.5));
  CHECK(*s.min == 1);
  CHECK(*s.max == 4);
  CHECK(*s.p50 == 2);
  CHECK(*s.p99 == 4);

  const auto empty = bento::summarize({});
  CHECK(empty.count == 0);
  CHECK_FALSE(empty.mean.has_value());
}

TEST_CASE("summary invariants hold on random vectors") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(1 + gen() % 300);
    for (auto& x : xs) x = static_cast<double>(gen() % 100000) / 7.0;
    const auto s = bento::summarize(xs);
    CHECK(*s.min <= *s.p50);
    CHECK(*s.p50 <= *s.p99);
    CHECK(*s.p99 <= *s.max);
    CHECK(*s.min <= *s.mean);
    CHECK(*s.mean <= *s.max);
  }
}

TEST_CASE("throughput") {
  const auto r = bento::compute_throughput(1000, 2'000'000'000, "ops");
  CHECK(r.value == 500.0);
  CHECK(r.unit == "ops/s");
  CHECK(code_of([] { bento::compute_throughput(1, 0, "ops"); }) == ErrorCode::kZeroElapsed);
}

TEST_CASE("sample lines round-trip and malformed lines are rejected") {
  bento::MetricSample s{"latency", 12.5, "ns", 7, 99};
  const auto back = bento::parse_sample_line(bento::to_jsonl(s), 1);
  CHECK(back.metric == "latency");
  CHECK(back.value == 12.5);
  CHECK(back.unit == "ns");
  CHECK(back.test_id == 7);
  CHECK(back.wall_time_ns == 99);

  for (const char* bad : {"nope", "[]", R"({"value":1,"unit":"x"})", R"({"metric":"m","unit":"x"})",
                          R"({"metric":"m","value":"1","unit":"x"})", R"({"metric":"m","value":1})",
                          R"({"metric":"m","value":1,"unit":"x","test_id":-1})"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { bento::parse_sample_line(bad, 3); }) == ErrorCode::kMalformedSample);
  }
  const auto defaulted = bento::parse_sample_line(R"({"metric":"m","value":1,"unit":"x"})", 1, 42);
  CHECK(defaulted.test_id == 42);
}

TEST_CASE("series beyond the reservoir cap keep a deterministic uniform subset") {
  std::vector<bento::TimedValue> points;
  for (int i = 0; i < 5000; ++i) points.push_back({static_cast<double>(i), i});

  bento::SampleRecorder a(3, 0, 100), b(3, 0, 100), full(3, 0, 10000);
  a.record_series("rtt", "ns", points);
  b.record_series("rtt", "ns", points);
  full.record_series("rtt", "ns", points);

  REQUIRE(a.samples().size() == 100);
  CHECK(full.samples().size() == 5000);
  std::set<double> seen;
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(a.samples()[i].value == b.samples()[i].value);
    CHECK(a.samples()[i].value >= 0);
    CHECK(a.samples()[i].value < 5000);
    seen.insert(a.samples()[i].value);
  }
  CHECK(seen.size() == 100);
  // A uniform sample of 0..4999 should not cluster in the first half.
  const auto high = std::count_if(seen.begin(), seen.end(), [](double v) { return v >= 2500; });
  CHECK(high > 25);
  CHECK(high < 75);
}
