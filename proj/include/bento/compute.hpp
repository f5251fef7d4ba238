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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bento::compute {

enum class DataType { kInt8, kInt128, kFp64 };
enum class ArithOp { kAdd, kSub, kMul, kDiv };
enum class StringOp { kCmp, kCat, kXfrm };

std::optional<DataType> parse_data_type(std::string_view name);
std::optional<ArithOp> parse_arith_op(std::string_view name);
std::optional<StringOp> parse_string_op(std::string_view name);
std::string_view to_string(DataType t) noexcept;
std::string_view to_string(ArithOp op) noexcept;
std::string_view to_string(StringOp op) noexcept;

struct ArithmeticParams {
  DataType type = DataType::kInt8;
  ArithOp op = ArithOp::kAdd;
  std::uint64_t iterations = 1;
  std::uint64_t seed = 0;
};

struct StringParams {
  std::size_t string_size = 10;
  StringOp op = StringOp::kCmp;
  std::uint64_t iterations = 1;
  std::uint64_t seed = 0;
};

struct ComputeOutcome {
  std::uint64_t ops_completed = 0;
  std::int64_t elapsed_ns = 0;
  std::uint64_t checksum = 0;
};

/// Rolling checksum step shared by every kernel:
///   c' = (rotl(c, 5) ^ bits) * 0x9E3779B97F4A7C15
constexpr std::uint64_t fold_checksum(std::uint64_t c, std::uint64_t bits) noexcept {
  return (((c << 5) | (c >> 59)) ^ bits) * 0x9E3779B97F4A7C15ULL;
}

/// Capacity of the reused append buffer of the `cat` operation; the buffer
/// is reset to empty when the next append would not fit.
inline constexpr std::size_t kCatBufferBytes = 64 * 1024;
inline constexpr std::size_t kDefaultCorpusStrings = 256;

/// Strings of one size generated from a seed: a shared random base string,
/// each copy re-randomized from a random position onward, so comparisons
/// inspect a variable-length common prefix.
class StringCorpus {
 public:
  StringCorpus(std::size_t string_size, std::uint64_t seed,
               std::size_t count = kDefaultCorpusStrings);

  std::size_t string_size() const noexcept { return size_; }
  std::size_t count() const noexcept { return strings_.size(); }
  std::string_view at(std::size_t i) const noexcept { return strings_[i]; }

 private:
  std::size_t size_;
  std::vector<std::string> strings_;
};

/// Executes `iterations` dependent operations: operand generation for op i+1
/// consumes the result bits of op i. Throws EmptyWorkload for 0 iterations.
ComputeOutcome run_arithmetic(const ArithmeticParams& params);
ComputeOutcome run_string(const StringParams& params, const StringCorpus& corpus);

/// Straightforward per-op interpreters of the same operation streams. The
/// report phase re-derives each run's checksum with these.
std::uint64_t reference_arithmetic(const ArithmeticParams& params);
std::uint64_t reference_string(const StringParams& params, const StringCorpus& corpus);

/// Three-way lexicographic byte comparison: -1, 0 or 1.
int compare_op(std::string_view a, std::string_view b) noexcept;

/// Locale-independent collation key: ASCII case fold, per-byte primary
/// weights, a 0x01 separator, then one case-level byte per input byte.
std::string collation_key(std::string_view s);
/// ASCII lower-casing.
std::string case_fold(std::string_view s);

/// Picks an iteration count so that `run(iterations)` takes at least
/// `target_ns`: a pilot that doubles until 1 ms, then linear scaling.
template <typename RunFn>
std::uint64_t calibrate_iterations(RunFn&& run, std::int64_t target_ns);

}  // namespace bento::compute

#include "bento/compute_inl.hpp"
