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
#include <cctype>
#include <random>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "bento/compute.hpp"
#include "bento/error.hpp"

namespace c = bento::compute;

namespace {

oracle::Type to_oracle(c::DataType t) {
  switch (t) {
    case c::DataType::kInt8: return oracle::Type::kInt8;
    case c::DataType::kInt128: return oracle::Type::kInt128;
    case c::DataType::kFp64: return oracle::Type::kFp64;
  }
  return oracle::Type::kInt8;
}

oracle::Arith to_oracle(c::ArithOp op) {
  switch (op) {
    case c::ArithOp::kAdd: return oracle::Arith::kAdd;
    case c::ArithOp::kSub: return oracle::Arith::kSub;
    case c::ArithOp::kMul: return oracle::Arith::kMul;
    case c::ArithOp::kDiv: return oracle::Arith::kDiv;
  }
  return oracle::Arith::kAdd;
}

oracle::Str to_oracle(c::StringOp op) {
  switch (op) {
    case c::StringOp::kCmp: return oracle::Str::kCmp;
    case c::StringOp::kCat: return oracle::Str::kCat;
    case c::StringOp::kXfrm: return oracle::Str::kXfrm;
  }
  return oracle::Str::kCmp;
}

}  // namespace

TEST_CASE("arithmetic kernels match the limb-wise interpreter") {
  for (auto type : {c::DataType::kInt8, c::DataType::kInt128, c::DataType::kFp64}) {
    for (auto op : {c::ArithOp::kAdd, c::ArithOp::kSub, c::ArithOp::kMul, c::ArithOp::kDiv}) {
      for (std::uint64_t seed : {0ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
        CAPTURE(c::to_string(type));
        CAPTURE(c::to_string(op));
        CAPTURE(seed);
        const c::ArithmeticParams p{type, op, 100'000, seed};
        const auto expected = oracle::arithmetic_checksum(to_oracle(type), to_oracle(op), p.iterations, seed);
        CHECK(c::run_arithmetic(p).checksum == expected);
        CHECK(c::reference_arithmetic(p) == expected);
      }
    }
  }
}

TEST_CASE("string corpus matches its generator definition") {
  for (std::size_t size : {1u, 10u, 100u, 1000u}) {
    const c::StringCorpus corpus(size, 42);
    const auto expected = oracle::string_corpus(size, 42);
    REQUIRE(corpus.count() == expected.size());
    for (std::size_t i = 0; i < corpus.count(); ++i) CHECK(corpus.at(i) == expected[i]);
  }
}

TEST_CASE("string kernels match the std::string interpreter") {
  for (std::size_t size : {10u, 100u, 1000u, 10000u}) {
    const c::StringCorpus corpus(size, 42);
    const auto strings = oracle::string_corpus(size, 42);
    for (auto op : {c::StringOp::kCmp, c::StringOp::kCat, c::StringOp::kXfrm}) {
      CAPTURE(size);
      CAPTURE(c::to_string(op));
      const c::StringParams p{size, op, 20'000, 7};
      const auto expected = oracle::string_checksum(strings, to_oracle(op), p.iterations, p.seed);
      CHECK(c::run_string(p, corpus).checksum == expected);
      CHECK(c::reference_string(p, corpus) == expected);
    }
  }
}

TEST_CASE("collation keys order case-insensitively first") {
  CHECK(c::collation_key("abc") < c::collation_key("ABD"));
  CHECK(c::collation_key("ABC") != c::collation_key("abc"));
  CHECK(c::collation_key("abc") < c::collation_key("ABC"));
  CHECK(c::collation_key("9") < c::collation_key("a"));
  CHECK(c::collation_key(" ") < c::collation_key("0"));
  CHECK(c::case_fold("MiXeD 9") == "mixed 9");
  const auto words = {"delta", "Alpha", "charlie", "Bravo", "alpha"};
  std::vector<std::string> v(words.begin(), words.end());
  std::sort(v.begin(), v.end(),
            [](const std::string& a, const std::string& b) { return c::collation_key(a) < c::collation_key(b); });
  CHECK(v == std::vector<std::string>{"alpha", "Alpha", "Bravo", "charlie", "delta"});
}

TEST_CASE("collation of lowercase input equals collation of its fold") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s(1024, ' ');
    for (auto& ch : s) ch = "abcdefghijklmnopqrstuvwxyz0123456789 "[gen() % 37];
    REQUIRE(c::case_fold(s) == s);
    CHECK(c::collation_key(s) == c::collation_key(c::case_fold(s)));
    std::string upper = s;
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    CHECK(c::collation_key(c::case_fold(upper)) == c::collation_key(s));
  }
}

TEST_CASE("compare_op is a sign") {
  CHECK(c::compare_op("a", "b") == -1);
  CHECK(c::compare_op("b", "a") == 1);
  CHECK(c::compare_op("same", "same") == 0);
}

TEST_CASE("zero iterations is an empty workload") {
  try {
    c::run_arithmetic({c::DataType::kInt8, c::ArithOp::kAdd, 0, 1});
    FAIL("expected EmptyWorkload");
  } catch (const bento::Error& e) {
    CHECK(e.code() == bento::ErrorCode::kEmptyWorkload);
  }
}

TEST_CASE("calibration reaches the target") {
  std::uint64_t last = 0;
  const auto n = c::calibrate_iterations(
      [&](std::uint64_t iters) {
        last = iters;
        return static_cast<std::int64_t>(iters) * 1000;  // 1 us per iteration
      },
      50'000'000);
  CHECK(n * 1000 >= 50'000'000);
  CHECK(n < 200'000);
  CHECK(last > 0);
}

TEST_CASE("names parse both ways") {
  CHECK(c::parse_data_type("float64") == c::DataType::kFp64);
  CHECK(c::parse_arith_op("div") == c::ArithOp::kDiv);
  CHECK(c::parse_string_op("xfrm") == c::StringOp::kXfrm);
  CHECK_FALSE(c::parse_data_type("int16").has_value());
}
