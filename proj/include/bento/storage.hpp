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
#include <filesystem>
#include <string>
#include <vector>

#include "bento/rng.hpp"

namespace bento::storage {

/// Buffer and offset alignment used for direct I/O.
inline constexpr std::uint64_t kAlignment = 4096;

enum class IoType { kRead, kWrite };
enum class Pattern { kRandom, kSequential };

enum class Engine {
  kAuto,        // kernel AIO, thread pool when the kernel refuses
  kKernelAio,   // io_setup/io_submit/io_getevents
  kThreadPool,  // queue_depth blocking helpers per worker
};

std::string_view to_string(Engine engine) noexcept;

struct StorageParams {
  IoType io_type = IoType::kRead;
  std::uint64_t access_size = 8 * 1024;
  Pattern pattern = Pattern::kRandom;
  unsigned queue_depth = 1;
  unsigned threads = 1;
  std::uint64_t file_size = 64ULL << 20;
  std::filesystem::path file;
  std::int64_t duration_ns = 1'000'000'000;
  bool direct_io = true;
  std::uint64_t seed = 42;
  /// When non-zero each worker submits exactly this many operations
  /// instead of submitting until duration_ns.
  std::uint64_t ops_per_worker = 0;
  Engine engine = Engine::kAuto;
};

struct IoOpRecord {
  std::int64_t submit_ns = 0;
  std::int64_t complete_ns = 0;
  std::uint64_t offset = 0;
  std::uint32_t size = 0;
  std::uint32_t worker = 0;
  std::int64_t result = 0;  // bytes transferred, or -errno
};

struct StorageOutcome {
  std::vector<IoOpRecord> ops;  // grouped by worker, completion order within a worker
  std::uint64_t bytes_done = 0;
  std::int64_t elapsed_ns = 0;  // start barrier to last completion
  bool direct = false;          // false when direct I/O was requested but refused
  Engine engine = Engine::kKernelAio;
};

/// min(4 GiB, max(64 MiB, 25% of the free space under `dir`)), rounded down
/// to kAlignment.
std::uint64_t default_file_size(const std::filesystem::path& dir);

/// Writes `file_size` bytes: the little-endian words of Xorshift64Star(seed),
/// truncated to size, then fsyncs. Throws InvalidParameter, InsufficientSpace,
/// PermissionDenied or Io.
void prepare_file(const std::filesystem::path& path, std::uint64_t file_size, std::uint64_t seed);

/// Offsets issued by random-pattern worker `worker`: Xorshift64Star seeded
/// with worker_seed(seed, worker), below(blocks) * access_size.
class OffsetStream {
 public:
  OffsetStream(std::uint64_t seed, unsigned worker, std::uint64_t file_size,
               std::uint64_t access_size) noexcept
      : rng_(worker_seed(seed, worker)), blocks_(file_size / access_size), access_size_(access_size) {}
  std::uint64_t next() noexcept { return rng_.below(blocks_) * access_size_; }

 private:
  Xorshift64Star rng_;
  std::uint64_t blocks_;
  std::uint64_t access_size_;
};

/// Half-open block range [begin, end) owned by sequential worker `worker`.
struct BlockRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};
BlockRange sequential_blocks(std::uint64_t blocks, unsigned threads, unsigned worker) noexcept;

/// The bytes every write operation stores.
std::vector<std::byte> write_block(std::uint64_t seed, std::uint64_t access_size);

/// Throws AccessSizeExceedsFile, InvalidParameter, PermissionDenied or Io
/// (when an operation fails).
StorageOutcome run_storage(const StorageParams& params);

}  // namespace bento::storage
