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

#include <cstdint>
#include <span>
#include <vector>

#include "bento/rng.hpp"

namespace bento::memory {

inline constexpr std::size_t kWordBytes = 8;

enum class Op { kRead, kWrite };
enum class Pattern { kRandom, kSequential };

struct MemoryParams {
  Op op = Op::kRead;
  std::uint64_t object_size = 16 * 1024;
  Pattern pattern = Pattern::kSequential;
  unsigned threads = 1;
  std::int64_t duration_ns = 500'000'000;
  std::uint64_t seed = 42;
  /// When non-zero each worker stops after exactly this many accesses
  /// instead of after duration_ns.
  std::uint64_t accesses_per_worker = 0;
};

struct WorkerResult {
  std::uint64_t accesses = 0;
  std::uint64_t checksum = 0;  // XOR of the words read (reads only)
  std::int64_t elapsed_ns = 0;
  bool pinned = false;
};

struct MemoryOutcome {
  std::uint64_t accesses_completed = 0;
  std::int64_t elapsed_ns = 0;
  std::uint64_t checksum = 0;
  std::vector<WorkerResult> workers;
};

/// Page-aligned, zero-filled word buffer backed by an anonymous mapping.
class Buffer {
 public:
  /// Throws SizeNotWordAligned or AllocationFailed.
  explicit Buffer(std::uint64_t bytes);
  ~Buffer();
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  Buffer(Buffer&& other) noexcept;
  Buffer& operator=(Buffer&& other) noexcept;

  std::span<std::uint64_t> words() noexcept { return {data_, count_}; }
  std::span<const std::uint64_t> words() const noexcept { return {data_, count_}; }

 private:
  std::uint64_t* data_ = nullptr;
  std::size_t count_ = 0;
  std::size_t mapped_ = 0;
};

/// The value the write workload stores at word `index`.
constexpr std::uint64_t pattern_word(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed) ^ (index * 0x9E3779B97F4A7C15ULL);
}

void fill_pattern(std::span<std::uint64_t> words, std::uint64_t seed) noexcept;

/// Word indices drawn by random-pattern worker `worker`: xorshift64* seeded
/// with worker_seed(seed, worker), reduced multiplicatively into [0, words).
class IndexStream {
 public:
  IndexStream(std::uint64_t seed, unsigned worker, std::uint64_t word_count) noexcept
      : rng_(worker_seed(seed, worker)), words_(word_count) {}
  std::uint64_t next() noexcept { return rng_.below(words_); }

 private:
  Xorshift64Star rng_;
  std::uint64_t words_;
};

/// Half-open word range [begin, end) owned by sequential worker `worker`.
struct Region {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};
Region sequential_region(std::uint64_t word_count, unsigned threads, unsigned worker) noexcept;

/// Runs the workload over `buffer`. Reads should see a pattern-filled buffer
/// (the allocating overload does that untimed).
MemoryOutcome run_memory(const MemoryParams& params, Buffer& buffer);
MemoryOutcome run_memory(const MemoryParams& params);

}  // namespace bento::memory
