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

#include "doctest.h"
#include "oracles.hpp"
#include "bento/error.hpp"
#include "bento/memory.hpp"

namespace m = bento::memory;

TEST_CASE("sequential write then readback reproduces the pattern") {
  for (std::uint64_t size : {16ULL << 10, 4ULL << 20}) {
    CAPTURE(size);
    m::Buffer buffer(size);
    m::MemoryParams p;
    p.op = m::Op::kWrite;
    p.pattern = m::Pattern::kSequential;
    p.object_size = size;
    p.seed = 9;
    p.accesses_per_worker = size / m::kWordBytes;
    const auto wrote = m::run_memory(p, buffer);
    CHECK(wrote.accesses_completed == size / 8);

    const auto words = buffer.words();
    std::uint64_t mismatches = 0, xor_all = 0;
    for (std::uint64_t i = 0; i < words.size(); ++i) {
      mismatches += words[i] != oracle::memory_word(9, i);
      xor_all ^= oracle::memory_word(9, i);
    }
    CHECK(mismatches == 0);

    p.op = m::Op::kRead;
    const auto read = m::run_memory(p, buffer);
    CHECK(read.accesses_completed == size / 8);
    CHECK(read.checksum == xor_all);
  }
}

TEST_CASE("multi-threaded sequential writes cover every word once") {
  m::Buffer buffer(1 << 20);
  m::MemoryParams p;
  p.op = m::Op::kWrite;
  p.object_size = 1 << 20;
  p.threads = 3;
  p.seed = 5;
  p.accesses_per_worker = 0;
  p.duration_ns = 20'000'000;
  m::run_memory(p, buffer);
  const auto words = buffer.words();
  std::uint64_t mismatches = 0;
  for (std::uint64_t i = 0; i < words.size(); ++i) mismatches += words[i] != oracle::memory_word(5, i);
  CHECK(mismatches == 0);
}

TEST_CASE("random index streams match the standalone generator") {
  for (unsigned worker : {0u, 1u, 7u}) {
    for (std::uint64_t words : {2048ULL, 524288ULL, 3ULL}) {
      m::IndexStream stream(42, worker, words);
      oracle::Rng ref(oracle::worker_seed(42, worker));
      std::uint64_t diffs = 0;
      for (int i = 0; i < 10000; ++i) {
        const auto got = stream.next();
        diffs += got != ref.below(words);
        CHECK(got < words);
      }
      CHECK(diffs == 0);
    }
  }
}

TEST_CASE("random reads over a pattern buffer XOR the drawn words") {
  const std::uint64_t size = 64 << 10;
  m::Buffer buffer(size);
  m::fill_pattern(buffer.words(), 3);
  m::MemoryParams p;
  p.op = m::Op::kRead;
  p.pattern = m::Pattern::kRandom;
  p.object_size = size;
  p.seed = 3;
  p.accesses_per_worker = 10000;
  const auto out = m::run_memory(p, buffer);
  oracle::Rng ref(oracle::worker_seed(3, 0));
  std::uint64_t expected = 0;
  for (int i = 0; i < 10000; ++i) expected ^= oracle::memory_word(3, ref.below(size / 8));
  CHECK(out.checksum == expected);
  CHECK(out.accesses_completed == 10000);
}

TEST_CASE("sequential regions partition the buffer") {
  for (unsigned threads : {1u, 2u, 3u, 7u, 64u}) {
    std::uint64_t next = 0;
    for (unsigned w = 0; w < threads; ++w) {
      const auto r = m::sequential_region(1000, threads, w);
      CHECK(r.begin == next);
      CHECK(r.end >= r.begin);
      CHECK(r.end - r.begin <= 1000 / threads + 1);
      next = r.end;
    }
    CHECK(next == 1000);
  }
}

TEST_CASE("buffer sizes must be word aligned") {
  try {
    m::Buffer b(12);
    FAIL("expected SizeNotWordAligned");
  } catch (const bento::Error& e) {
    CHECK(e.code() == bento::ErrorCode::kSizeNotWordAligned);
  }
}

TEST_CASE("timed runs report per-worker counts") {
  m::MemoryParams p;
  p.object_size = 16 << 10;
  p.threads = 2;
  p.duration_ns = 10'000'000;
  const auto out = m::run_memory(p);
  REQUIRE(out.workers.size() == 2);
  CHECK(out.accesses_completed == out.workers[0].accesses + out.workers[1].accesses);
  CHECK(out.accesses_completed > 0);
  CHECK(out.elapsed_ns >= 10'000'000);
}
