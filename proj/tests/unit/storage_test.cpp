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
#include <fstream>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "bento/error.hpp"
#include "bento/storage.hpp"

namespace s = bento::storage;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFile = 8ULL << 20;

s::StorageParams params(const fs::path& file, s::IoType io, unsigned qd, s::Engine engine) {
  s::StorageParams p;
  p.file = file;
  p.file_size = kFile;
  p.io_type = io;
  p.queue_depth = qd;
  p.engine = engine;
  p.ops_per_worker = 500;
  p.seed = 17;
  return p;
}

std::string engine_name(s::Engine e) { return std::string(s::to_string(e)); }

// Largest number of ops of one worker in flight at the same instant.
std::size_t max_in_flight(const std::vector<s::IoOpRecord>& ops, std::uint32_t worker) {
  std::vector<std::pair<std::int64_t, int>> edges;
  for (const auto& op : ops) {
    if (op.worker != worker) continue;
    edges.push_back({op.submit_ns, +1});
    edges.push_back({op.complete_ns, -1});
  }
  // At equal timestamps completions go first: touching intervals do not overlap.
  std::sort(edges.begin(), edges.end());
  std::size_t cur = 0, best = 0;
  for (const auto& [t, d] : edges) {
    cur = static_cast<std::size_t>(static_cast<long>(cur) + d);
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace

TEST_CASE("prepared file holds the seeded word stream") {
  testing::TempDir dir("bento-storage");
  const auto file = dir / "data.bin";
  s::prepare_file(file, 1 << 20, 5);
  REQUIRE(fs::file_size(file) == 1 << 20);
  const std::string bytes = testing::slurp(file);
  oracle::Rng rng(5);
  std::uint64_t diffs = 0;
  for (std::size_t i = 0; i < bytes.size(); i += 8) {
    const std::uint64_t w = rng.next();
    for (int b = 0; b < 8; ++b) diffs += static_cast<unsigned char>(bytes[i + b]) != ((w >> (8 * b)) & 0xFF);
  }
  CHECK(diffs == 0);
}

TEST_CASE("op logs are complete and respect the queue depth") {
  testing::TempDir dir("bento-storage");
  const auto file = dir / "data.bin";
  s::prepare_file(file, kFile, 17);
  for (auto engine : {s::Engine::kAuto, s::Engine::kThreadPool}) {
    for (auto io : {s::IoType::kRead, s::IoType::kWrite}) {
      for (unsigned qd : {1u, 16u}) {
        CAPTURE(engine_name(engine));
        CAPTURE(qd);
        CAPTURE(io == s::IoType::kRead ? "read" : "write");
        auto p = params(file, io, qd, engine);
        p.threads = 2;
        const auto out = s::run_storage(p);
        REQUIRE(out.ops.size() == 1000);
        std::uint64_t bytes = 0;
        std::int64_t last = 0;
        for (const auto& op : out.ops) {
          CHECK(op.result == static_cast<std::int64_t>(p.access_size));
          CHECK(op.offset % p.access_size == 0);
          CHECK(op.offset + p.access_size <= kFile);
          CHECK(op.complete_ns >= op.submit_ns);
          bytes += op.size;
          last = std::max(last, op.complete_ns);
        }
        CHECK(out.bytes_done == bytes);
        CHECK(out.elapsed_ns > 0);
        for (std::uint32_t w = 0; w < 2; ++w) {
          const auto peak = max_in_flight(out.ops, w);
          CHECK(peak <= qd);
          if (qd == 1) CHECK(peak == 1);
        }

        // Random offsets are the worker's generator draws (a multiset, since
        // completions may reorder at depth > 1).
        for (std::uint32_t w = 0; w < 2; ++w) {
          std::vector<std::uint64_t> got, want;
          for (const auto& op : out.ops) {
            if (op.worker == w) got.push_back(op.offset);
          }
          oracle::Rng rng(oracle::worker_seed(17, w));
          for (std::size_t i = 0; i < got.size(); ++i) want.push_back(rng.below(kFile / p.access_size) * p.access_size);
          if (qd > 1) {
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
          }
          CHECK(got == want);
        }
      }
    }
  }
}

TEST_CASE("writes store the write block") {
  testing::TempDir dir("bento-storage");
  const auto file = dir / "data.bin";
  s::prepare_file(file, kFile, 17);
  auto p = params(file, s::IoType::kWrite, 4, s::Engine::kAuto);
  const auto out = s::run_storage(p);
  const std::string bytes = testing::slurp(file);
  const auto block = s::write_block(p.seed, p.access_size);
  oracle::Rng rng(oracle::splitmix(p.seed ^ 0x7772697465ULL));
  for (std::size_t i = 0; i < block.size(); i += 8) {
    const std::uint64_t w = rng.next();
    for (int b = 0; b < 8; ++b) REQUIRE(static_cast<unsigned char>(block[i + b]) == ((w >> (8 * b)) & 0xFF));
  }
  std::uint64_t diffs = 0;
  for (const auto& op : out.ops) {
    diffs += bytes.compare(op.offset, p.access_size,
                           std::string(reinterpret_cast<const char*>(block.data()), block.size())) != 0;
  }
  CHECK(diffs == 0);
}

TEST_CASE("sequential workers stay inside their block ranges") {
  testing::TempDir dir("bento-storage");
  const auto file = dir / "data.bin";
  s::prepare_file(file, kFile, 17);
  auto p = params(file, s::IoType::kRead, 2, s::Engine::kAuto);
  p.pattern = s::Pattern::kSequential;
  p.threads = 3;
  p.ops_per_worker = 100;
  const auto out = s::run_storage(p);
  const std::uint64_t blocks = kFile / p.access_size;
  for (const auto& op : out.ops) {
    const auto range = s::sequential_blocks(blocks, 3, op.worker);
    CHECK(op.offset / p.access_size >= range.begin);
    CHECK(op.offset / p.access_size < range.end);
  }
}

TEST_CASE("parameter errors") {
  testing::TempDir dir("bento-storage");
  const auto file = dir / "data.bin";
  s::prepare_file(file, 1 << 20, 1);
  auto code = [](const s::StorageParams& p) {
    try {
      s::run_storage(p);
    } catch (const bento::Error& e) {
      return e.code();
    }
    return bento::ErrorCode::kOk;
  };
  auto p = params(file, s::IoType::kRead, 1, s::Engine::kAuto);
  p.file_size = 1 << 20;
  p.ops_per_worker = 1;

  auto bad = p;
  bad.access_size = 1000;
  CHECK(code(bad) == bento::ErrorCode::kInvalidParameter);
  bad = p;
  bad.access_size = 2 << 20;
  CHECK(code(bad) == bento::ErrorCode::kAccessSizeExceedsFile);
  bad = p;
  bad.file = dir / "missing.bin";
  CHECK(code(bad) == bento::ErrorCode::kInvalidParameter);
  bad = p;
  bad.queue_depth = 0;
  CHECK(code(bad) == bento::ErrorCode::kInvalidParameter);
  CHECK(code(p) == bento::ErrorCode::kOk);
}

TEST_CASE("default file size is clamped and aligned") {
  const auto size = s::default_file_size(fs::temp_directory_path());
  CHECK(size % s::kAlignment == 0);
  CHECK(size <= 4ULL << 30);
}

TEST_CASE("sequential block ranges partition the file") {
  std::uint64_t next = 0;
  for (unsigned w = 0; w < 5; ++w) {
    const auto r = s::sequential_blocks(1003, 5, w);
    CHECK(r.begin == next);
    next = r.end;
  }
  CHECK(next == 1003);
}
