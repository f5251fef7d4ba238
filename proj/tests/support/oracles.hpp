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

// Reference models the tests compare the library against. Nothing here
// includes library headers: every generator and kernel is rewritten from its
// definition, with 128-bit arithmetic done on 64-bit limbs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

std::uint64_t splitmix(std::uint64_t x);
std::uint64_t rotl(std::uint64_t v, int s);
/// High 64 bits of a * b.
std::uint64_t mulhi(std::uint64_t a, std::uint64_t b);
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t h = 0xCBF29CE484222325ULL);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  std::uint64_t below(std::uint64_t bound) { return mulhi(next(), bound); }
  double unit();

 private:
  std::uint64_t s_;
};

std::uint64_t worker_seed(std::uint64_t seed, std::uint64_t index);

// Percentiles. `percent` is an integer 0..100 so the rank is exact.
std::size_t nearest_rank(std::size_t n, unsigned percent);
double percentile(std::vector<double> values, unsigned percent);

// Compute kernels.
enum class Type { kInt8, kInt128, kFp64 };
enum class Arith { kAdd, kSub, kMul, kDiv };
enum class Str { kCmp, kCat, kXfrm };

std::uint64_t arithmetic_checksum(Type type, Arith op, std::uint64_t iterations,
                                  std::uint64_t seed);
std::vector<std::string> string_corpus(std::size_t size, std::uint64_t seed,
                                       std::size_t count = 256);
std::uint64_t string_checksum(const std::vector<std::string>& corpus, Str op,
                              std::uint64_t iterations, std::uint64_t seed);

// Memory.
std::uint64_t memory_word(std::uint64_t seed, std::uint64_t index);

// Network: message `seq` of connection `conn`.
std::vector<unsigned char> net_message(std::uint64_t size, std::uint64_t seed, unsigned conn,
                                       std::uint64_t seq);

// Index.
/// Keys [0, b) go to the host: b counts j >= 1 with j * (host + dpu) <= K * host.
std::uint64_t host_partition_size(std::uint64_t records, std::uint64_t host, std::uint64_t dpu);
class Zipf {
 public:
  Zipf(std::uint64_t n, double theta, std::uint64_t seed);
  std::uint64_t next();

 private:
  std::uint64_t n_;
  double theta_, zetan_, eta_, alpha_, two_;
  Rng rng_;
};
std::vector<unsigned char> index_value(std::uint64_t seed, std::uint64_t key,
                                       std::uint64_t version, std::uint64_t size);

// Pushdown: digest of the little-endian keys 0..count-1.
std::uint64_t prefix_key_digest(std::uint64_t count);

/// Storage op log as written to oplog.csv.
struct OpRow {
  std::uint32_t worker = 0;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
  std::int64_t submit_ns = 0;
  std::int64_t complete_ns = 0;
  std::int64_t result = 0;
};
std::vector<OpRow> read_oplog(const std::filesystem::path& path);

/// FNV over every relative path and file content under `dir`, in sorted order.
std::uint64_t directory_digest(const std::filesystem::path& dir);

}  // namespace oracle
