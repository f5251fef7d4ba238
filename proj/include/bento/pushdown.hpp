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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bento/net.hpp"

namespace bento::pushdown {

inline constexpr std::uint64_t kDefaultTupleWidth = 128;
inline constexpr std::uint64_t kMinTupleWidth = 8;
inline constexpr std::uint64_t kMaxTupleWidth = 1 << 20;
/// Tuples per response batch.
inline constexpr std::uint64_t kBatchTuples = 64 * 1024;
/// Batch header: tuple count, u64 little-endian. A zero count ends a stream.
inline constexpr std::uint64_t kBatchHeaderBytes = 8;

/// Tuple layout: [key: u64 little-endian][payload: tuple_width - 8 bytes].
/// Keys are a seeded permutation of 0..tuple_count-1.
struct TableSpec {
  std::uint64_t tuple_count = 0;
  std::uint64_t tuple_width = kDefaultTupleWidth;
  std::uint64_t seed = 42;

  std::string file_name() const;
};

/// Fisher-Yates over 0..n-1 with Xorshift64Star(seed): for i from n-1 down
/// to 1, swap(p[i], p[below(i + 1)]).
std::vector<std::uint64_t> key_permutation(std::uint64_t n, std::uint64_t seed);

/// Payload bytes of the tuple holding `key`.
void fill_payload(std::span<std::byte> payload, std::uint64_t seed, std::uint64_t key) noexcept;

/// Writes the table file. Throws InvalidParameter, InsufficientSpace or Io.
void generate_table(const TableSpec& spec, const std::filesystem::path& path);

/// floor(s * n), the predicate threshold: key < threshold qualifies.
std::uint64_t threshold_for(double selectivity, std::uint64_t n) noexcept;

/// Read-only mapping of a generated table.
class Table {
 public:
  /// Throws TableMissing when the file is absent or has the wrong size.
  Table(const std::filesystem::path& path, const TableSpec& spec);
  ~Table();
  Table(const Table&) = delete;
  Table& operator=(const Table&) = delete;

  const TableSpec& spec() const noexcept { return spec_; }
  const std::byte* tuple(std::uint64_t i) const noexcept { return base_ + i * spec_.tuple_width; }
  std::uint64_t key(std::uint64_t i) const noexcept;

 private:
  TableSpec spec_;
  const std::byte* base_ = nullptr;
  std::size_t mapped_ = 0;
};

/// Storage-node server keeping tables under `table_dir`. Requests are frames:
///   'T' N width seed                         generate the table if absent
///   'S' N width seed lo hi threshold slowdown scan tuples [lo, hi)
/// (u64 little-endian fields, slowdown as f64 bits). Each request gets a
/// status frame (byte 0 = ErrorCode, 0 for ok, then a message); a scan then streams
/// batches. threshold == UINT64_MAX disables filtering.
std::unique_ptr<net::TcpServer> start_storage_node(const std::string& host, std::uint16_t port,
                                                   const std::filesystem::path& table_dir);

enum class Mode { kBaseline, kPushdown };

struct ScanParams {
  Mode mode = Mode::kPushdown;
  net::Endpoint node;
  TableSpec table;
  double selectivity = 0.01;
  unsigned dpu_cores = 1;
  double slowdown = 1.0;
};

struct ScanOutcome {
  std::uint64_t tuples_scanned = 0;
  std::uint64_t qualifying = 0;
  std::uint64_t payload_bytes = 0;      // tuple bytes received
  std::uint64_t bytes_transferred = 0;  // payload plus batch headers and end markers
  std::int64_t elapsed_ns = 0;
  std::vector<std::uint64_t> keys;  // qualifying keys, sorted ascending
};

/// Asks the node to generate the table. Throws PeerUnreachable or Io.
void request_table(const net::Endpoint& node, const TableSpec& spec);

/// Throws PeerUnreachable, TableMissing, PeerClosed or Protocol.
ScanOutcome run_scan(const ScanParams& params);

/// fnv1a over the little-endian bytes of `sorted_keys`.
std::uint64_t key_digest(std::span<const std::uint64_t> sorted_keys) noexcept;

}  // namespace bento::pushdown
