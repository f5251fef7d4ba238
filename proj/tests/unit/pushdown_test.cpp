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
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "bento/error.hpp"
#include "bento/pushdown.hpp"

namespace pd = bento::pushdown;

namespace {

std::vector<std::uint64_t> reference_permutation(std::uint64_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  oracle::Rng rng(seed);
  for (std::uint64_t i = n; i-- > 1;) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

struct Node {
  testing::TempDir dir{"bento-pushdown"};
  std::unique_ptr<bento::net::TcpServer> server = pd::start_storage_node("127.0.0.1", 0, dir.path());
  bento::net::Endpoint endpoint() const { return {"127.0.0.1", server->port()}; }
};

}  // namespace

TEST_CASE("key permutation is the seeded Fisher-Yates shuffle") {
  for (std::uint64_t n : {1ULL, 2ULL, 1000ULL}) {
    CHECK(pd::key_permutation(n, 9) == reference_permutation(n, 9));
  }
  auto p = pd::key_permutation(5000, 1);
  std::sort(p.begin(), p.end());
  for (std::uint64_t i = 0; i < p.size(); ++i) REQUIRE(p[i] == i);
}

TEST_CASE("threshold is floor(s * n)") {
  CHECK(pd::threshold_for(0.0, 100000) == 0);
  CHECK(pd::threshold_for(0.01, 100000) == 1000);
  CHECK(pd::threshold_for(0.5, 100001) == 50000);
  CHECK(pd::threshold_for(1.0, 100000) == 100000);
  CHECK(pd::threshold_for(1.5, 10) == 10);
  CHECK(pd::threshold_for(-1.0, 10) == 0);
}

TEST_CASE("generated table holds the permutation and payloads") {
  testing::TempDir dir("bento-pushdown");
  const pd::TableSpec spec{3000, 64, 11};
  pd::generate_table(spec, dir / spec.file_name());
  const pd::Table table(dir / spec.file_name(), spec);
  const auto perm = reference_permutation(3000, 11);
  std::vector<std::byte> payload(56);
  for (std::uint64_t i = 0; i < 3000; ++i) {
    REQUIRE(table.key(i) == perm[i]);
    pd::fill_payload(payload, 11, perm[i]);
    REQUIRE(std::equal(payload.begin(), payload.end(), table.tuple(i) + 8));
  }
  CHECK_THROWS_AS(pd::Table(dir / "absent.bin", spec), bento::Error);
}

TEST_CASE("baseline and pushdown return the same qualifying keys") {
  Node node;
  const pd::TableSpec spec{20000, 32, 3};
  pd::request_table(node.endpoint(), spec);
  for (double s : {0.0, 0.01, 0.37, 1.0}) {
    const auto t = static_cast<std::uint64_t>(std::floor(s * 20000));
    std::uint64_t digests[2];
    for (auto mode : {pd::Mode::kBaseline, pd::Mode::kPushdown}) {
      for (unsigned cores : {1u, 3u}) {
        CAPTURE(s);
        CAPTURE(cores);
        pd::ScanParams p;
        p.mode = mode;
        p.node = node.endpoint();
        p.table = spec;
        p.selectivity = s;
        p.dpu_cores = cores;
        const auto out = pd::run_scan(p);
        CHECK(out.tuples_scanned == 20000);
        CHECK(out.qualifying == t);
        REQUIRE(out.keys.size() == t);
        for (std::uint64_t k = 0; k < t; ++k) REQUIRE(out.keys[k] == k);
        digests[mode == pd::Mode::kPushdown] = pd::key_digest(out.keys);
        CHECK(digests[mode == pd::Mode::kPushdown] == oracle::prefix_key_digest(t));
        if (mode == pd::Mode::kBaseline) {
          CHECK(out.payload_bytes == 20000 * 32);
        } else {
          CHECK(out.payload_bytes == t * 32);
        }
        CHECK(out.bytes_transferred > out.payload_bytes);
      }
    }
    CHECK(digests[0] == digests[1]);
  }
}

TEST_CASE("slowdown does not change results") {
  Node node;
  const pd::TableSpec spec{5000, 16, 8};
  pd::request_table(node.endpoint(), spec);
  pd::ScanParams p;
  p.node = node.endpoint();
  p.table = spec;
  p.selectivity = 0.2;
  p.slowdown = 3.0;
  p.dpu_cores = 2;
  const auto out = pd::run_scan(p);
  CHECK(out.qualifying == 1000);
}

TEST_CASE("scan errors") {
  Node node;
  pd::ScanParams p;
  p.node = node.endpoint();
  p.table = {1000, 16, 99};
  try {
    pd::run_scan(p);
    FAIL("expected TableMissing");
  } catch (const bento::Error& e) {
    CHECK(e.code() == bento::ErrorCode::kTableMissing);
    CHECK(std::string(e.what()).rfind("TableMissing: ", 0) == 0);
    CHECK(std::string(e.what()).find("TableMissing: TableMissing") == std::string::npos);
  }
  std::uint16_t dead;
  {
    Node gone;
    dead = gone.server->port();
  }
  p.node = {"127.0.0.1", dead};
  try {
    pd::run_scan(p);
    FAIL("expected PeerUnreachable");
  } catch (const bento::Error& e) {
    CHECK(e.code() == bento::ErrorCode::kPeerUnreachable);
  }
}

TEST_CASE("key digest is FNV over little-endian keys") {
  const std::vector<std::uint64_t> keys{0, 1, 2, 3};
  CHECK(pd::key_digest(keys) == oracle::prefix_key_digest(4));
  CHECK(pd::key_digest({}) == oracle::prefix_key_digest(0));
}
