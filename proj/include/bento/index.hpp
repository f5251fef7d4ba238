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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bento/net.hpp"
#include "bento/rng.hpp"

namespace bento::index {

inline constexpr double kZipfTheta = 0.99;
/// Records are an 8-byte key plus a value of record_size - 8 bytes whose
/// first 8 bytes hold the version that wrote it (0 = initial load).
inline constexpr std::uint64_t kMinRecordSize = 16;

struct SplitRatio {
  std::uint64_t host = 10;
  std::uint64_t dpu = 1;
};

/// "host:dpu" with non-negative integers, not both zero.
std::optional<SplitRatio> parse_split_ratio(std::string_view text);

/// floor(K * host / (host + dpu)): keys below it belong to the host partition.
std::uint64_t split_boundary(std::uint64_t record_count, SplitRatio ratio) noexcept;

/// Gray et al.'s zipfian generator with a precomputed zeta(n, theta):
/// rank 0 is the hottest key. Draws use Xorshift64Star(seed).unit().
class ZipfianGenerator {
 public:
  ZipfianGenerator(std::uint64_t n, double theta, std::uint64_t seed);
  std::uint64_t next() noexcept;

  static double zeta(std::uint64_t n, double theta) noexcept;

 private:
  std::uint64_t n_;
  double theta_;
  double alpha_;
  double zetan_;
  double eta_;
  double half_pow_theta_;
  Xorshift64Star rng_;
};

/// Value of `size` bytes: version (u64 LE), then bytes of
/// Xorshift64Star(mix64(seed ^ mix64(key) ^ mix64(version))).
std::vector<std::byte> make_value(std::uint64_t seed, std::uint64_t key, std::uint64_t version,
                                  std::uint64_t size);
/// The version stored in `value`, or nullopt when its bytes are not what
/// make_value produces for that version.
std::optional<std::uint64_t> decode_value(std::span<const std::byte> value, std::uint64_t seed,
                                          std::uint64_t key);

/// Partition server over the length-prefixed frame protocol. Requests
/// (u64 fields little-endian):
///   'I' lo hi        reset to an empty partition serving [lo, hi)
///   'G' key          get
///   'P' key value    put
///   'B' n {key len value}*n  bulk put
///   'C'              key count
///   'R' lo hi        all records in [lo, hi)
/// Replies start with a status byte (see Status).
std::unique_ptr<net::TcpServer> start_partition_server(const std::string& host, std::uint16_t port);

enum class Status : std::uint8_t { kOk = 0, kNotFound = 1, kWrongPartition = 2, kBadRequest = 3 };

class PartitionClient {
 public:
  /// Throws ServerUnreachable.
  explicit PartitionClient(const net::Endpoint& server);

  void init(std::uint64_t lo, std::uint64_t hi);
  /// nullopt when absent. Throws RoutingError when the key is out of range.
  std::optional<std::vector<std::byte>> get(std::uint64_t key);
  void put(std::uint64_t key, std::span<const std::byte> value);
  void bulk_put(std::span<const std::pair<std::uint64_t, std::vector<std::byte>>> records);
  std::uint64_t count();
  std::map<std::uint64_t, std::vector<std::byte>> scan(std::uint64_t lo, std::uint64_t hi);

 private:
  std::vector<std::byte> call(std::span<const std::byte> request);

  net::Socket socket_;
  std::vector<std::byte> reply_;
};

enum class KeyPattern { kUniform, kZipfian };

struct IndexParams {
  std::uint64_t record_count = 100'000;
  std::uint64_t record_size = 128;
  double read_fraction = 1.0;
  KeyPattern pattern = KeyPattern::kUniform;
  SplitRatio split;
  unsigned threads = 1;
  std::int64_t duration_ns = 1'000'000'000;
  /// When non-zero each client thread issues exactly this many operations.
  std::uint64_t ops_per_thread = 0;
  std::uint64_t seed = 42;
  net::Endpoint host;
  net::Endpoint dpu;
};

struct LoadResult {
  std::uint64_t boundary = 0;
  std::uint64_t host_keys = 0;
  std::uint64_t dpu_keys = 0;
};

/// Resets both partitions and inserts keys 0..K-1 at version 0.
/// Throws ServerUnreachable.
LoadResult load_index(const IndexParams& params);

struct WriteRecord {
  std::uint64_t key = 0;
  std::uint64_t version = 0;
  std::int64_t invoke_ns = 0;
  std::int64_t ack_ns = 0;
};

struct IndexOutcome {
  std::uint64_t host_ops = 0;
  std::uint64_t dpu_ops = 0;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::int64_t elapsed_ns = 0;
  /// Reads whose value was absent or did not decode.
  std::uint64_t read_mismatches = 0;
  /// Reads returning a version never written to that key.
  std::uint64_t read_version_violations = 0;
  std::vector<WriteRecord> write_log;
};

/// Runs the client workload. Throws RoutingError, ServerUnreachable.
IndexOutcome run_index_workload(const IndexParams& params);

struct AuditResult {
  std::uint64_t keys_checked = 0;
  std::uint64_t violations = 0;
  std::string first_violation;
};

/// Every key must hold version 0 when it was never written, otherwise a
/// write that no other acknowledged write to the same key strictly follows
/// (invoked after its acknowledgement). Scans both partitions.
AuditResult audit_history(const IndexParams& params, std::span<const WriteRecord> writes);

}  // namespace bento::index
