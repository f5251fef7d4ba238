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

#include "bento/compute.hpp"

#include <bit>
#include <cstring>

#include "bento/error.hpp"
#include "bento/rng.hpp"
#include "bento/util.hpp"

namespace bento::compute {

std::optional<DataType> parse_data_type(std::string_view name) {
  if (name == "int8") return DataType::kInt8;
  if (name == "int128") return DataType::kInt128;
  if (name == "fp64" || name == "float64") return DataType::kFp64;
  return std::nullopt;
}

std::optional<ArithOp> parse_arith_op(std::string_view name) {
  if (name == "add") return ArithOp::kAdd;
  if (name == "sub") return ArithOp::kSub;
  if (name == "mul") return ArithOp::kMul;
  if (name == "div") return ArithOp::kDiv;
  return std::nullopt;
}

std::optional<StringOp> parse_string_op(std::string_view name) {
  if (name == "cmp") return StringOp::kCmp;
  if (name == "cat") return StringOp::kCat;
  if (name == "xfrm") return StringOp::kXfrm;
  return std::nullopt;
}

std::string_view to_string(DataType t) noexcept {
  switch (t) {
    case DataType::kInt8: return "int8";
    case DataType::kInt128: return "int128";
    case DataType::kFp64: return "fp64";
  }
  return "?";
}

std::string_view to_string(ArithOp op) noexcept {
  switch (op) {
    case ArithOp::kAdd: return "add";
    case ArithOp::kSub: return "sub";
    case ArithOp::kMul: return "mul";
    case ArithOp::kDiv: return "div";
  }
  return "?";
}

std::string_view to_string(StringOp op) noexcept {
  switch (op) {
    case StringOp::kCmp: return "cmp";
    case StringOp::kCat: return "cat";
    case StringOp::kXfrm: return "xfrm";
  }
  return "?";
}

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::uint64_t rotl(std::uint64_t v, int s) noexcept {
  return (v << s) | (v >> (64 - s));
}

constexpr std::uint64_t reduce(std::uint64_t v, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<u128>(v) * bound) >> 64);
}

constexpr double unit_operand(std::uint64_t bits) noexcept {
  return 1.0 + static_cast<double>(bits >> 12) * 0x1.0p-52;
}

void require_iterations(std::uint64_t iterations) {
  if (iterations == 0) raise(ErrorCode::kEmptyWorkload, "iterations must be >= 1");
}

// ---- tight kernels: type and operation fixed at compile time ----

template <ArithOp Op>
std::uint64_t kernel_int8(std::uint64_t iterations, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  std::uint64_t prev = 0;
  std::uint64_t checksum = seed;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const std::uint64_t r = rng.next();
    const std::uint64_t x = r ^ prev;
    const int lhs = static_cast<std::int8_t>(static_cast<std::uint8_t>(x));
    const auto raw = static_cast<std::uint8_t>(r >> 32);
    int result;
    if constexpr (Op == ArithOp::kAdd) result = lhs + static_cast<std::int8_t>(raw);
    if constexpr (Op == ArithOp::kSub) result = lhs - static_cast<std::int8_t>(raw);
    if constexpr (Op == ArithOp::kMul) result = lhs * static_cast<std::int8_t>(raw);
    if constexpr (Op == ArithOp::kDiv) result = lhs / (1 + raw % 127);
    const std::uint64_t bits = static_cast<std::uint8_t>(static_cast<std::int8_t>(result));
    checksum = fold_checksum(checksum, bits);
    prev = bits;
  }
  return checksum;
}

template <ArithOp Op>
std::uint64_t kernel_fp64(std::uint64_t iterations, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  std::uint64_t prev = 0;
  std::uint64_t checksum = seed;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const std::uint64_t r = rng.next();
    const double lhs = unit_operand(r ^ prev);
    const double rhs = unit_operand(rotl(r, 29));
    double result;
    if constexpr (Op == ArithOp::kAdd) result = lhs + rhs;
    if constexpr (Op == ArithOp::kSub) result = lhs - rhs;
    if constexpr (Op == ArithOp::kMul) result = lhs * rhs;
    if constexpr (Op == ArithOp::kDiv) result = lhs / rhs;
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(result);
    checksum = fold_checksum(checksum, bits);
    prev = bits;
  }
  return checksum;
}

template <ArithOp Op>
std::uint64_t kernel_int128(std::uint64_t iterations, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  std::uint64_t prev = 0;
  std::uint64_t checksum = seed;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const std::uint64_t r = rng.next();
    const u128 lhs = (static_cast<u128>(r ^ prev) << 64) | rotl(r, 23);
    const std::uint64_t rhs_lo = r * Xorshift64Star::kMultiplier;
    u128 result;
    if constexpr (Op == ArithOp::kDiv) {
      const u128 rhs = ((static_cast<u128>(rotl(r, 41) >> 33) << 64) | rhs_lo) | 1;
      result = static_cast<u128>(static_cast<i128>(lhs) / static_cast<i128>(rhs));
    } else {
      const u128 rhs = (static_cast<u128>(rotl(r, 41)) << 64) | rhs_lo;
      if constexpr (Op == ArithOp::kAdd) result = lhs + rhs;
      if constexpr (Op == ArithOp::kSub) result = lhs - rhs;
      if constexpr (Op == ArithOp::kMul) result = lhs * rhs;
    }
    const auto lo = static_cast<std::uint64_t>(result);
    const auto hi = static_cast<std::uint64_t>(result >> 64);
    checksum = fold_checksum(fold_checksum(checksum, lo), hi);
    prev = lo ^ hi;
  }
  return checksum;
}

template <ArithOp Op>
std::uint64_t dispatch_type(DataType type, std::uint64_t iterations, std::uint64_t seed) {
  switch (type) {
    case DataType::kInt8: return kernel_int8<Op>(iterations, seed);
    case DataType::kFp64: return kernel_fp64<Op>(iterations, seed);
    case DataType::kInt128: return kernel_int128<Op>(iterations, seed);
  }
  return 0;
}

std::uint64_t run_kernel(const ArithmeticParams& p) {
  switch (p.op) {
    case ArithOp::kAdd: return dispatch_type<ArithOp::kAdd>(p.type, p.iterations, p.seed);
    case ArithOp::kSub: return dispatch_type<ArithOp::kSub>(p.type, p.iterations, p.seed);
    case ArithOp::kMul: return dispatch_type<ArithOp::kMul>(p.type, p.iterations, p.seed);
    case ArithOp::kDiv: return dispatch_type<ArithOp::kDiv>(p.type, p.iterations, p.seed);
  }
  return 0;
}

constexpr std::uint8_t primary_weight(unsigned char folded) noexcept {
  if (folded >= '0' && folded <= '9') return static_cast<std::uint8_t>(0x10 + (folded - '0'));
  if (folded >= 'a' && folded <= 'z') return static_cast<std::uint8_t>(0x20 + (folded - 'a'));
  if (folded == ' ') return 0x08;
  return folded;
}

constexpr unsigned char fold_byte(unsigned char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<unsigned char>(c + ('a' - 'A')) : c;
}

struct KeyTables {
  std::uint8_t primary[256];
  std::uint8_t case_level[256];
};

constexpr KeyTables make_key_tables() noexcept {
  KeyTables t{};
  for (unsigned c = 0; c < 256; ++c) {
    t.primary[c] = primary_weight(fold_byte(static_cast<unsigned char>(c)));
    t.case_level[c] = (c >= 'A' && c <= 'Z') ? 0x02 : 0x01;
  }
  return t;
}

inline constexpr KeyTables kKeyTables = make_key_tables();

// Writes the key of `s` into out[0 .. 2|s|].
std::size_t write_key(std::string_view s, unsigned char* out) noexcept {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    out[i] = kKeyTables.primary[c];
    out[n + 1 + i] = kKeyTables.case_level[c];
  }
  out[n] = 0x01;
  return 2 * n + 1;
}

// FNV-1a over little-endian 8-byte words (the tail zero-padded), then the
// length. Byte-wise FNV would cost more than building the key.
std::uint64_t key_digest(const unsigned char* key, std::size_t size) noexcept {
  constexpr std::uint64_t kPrime = 0x100000001B3ULL;
  std::uint64_t h = 0xCBF29CE484222325ULL;
  std::size_t i = 0;
  for (; i + 8 <= size; i += 8) {
    std::uint64_t w = 0;
    for (int j = 0; j < 8; ++j) w |= static_cast<std::uint64_t>(key[i + j]) << (8 * j);
    h = (h ^ w) * kPrime;
  }
  if (i < size) {
    std::uint64_t w = 0;
    for (std::size_t j = 0; i + j < size; ++j) w |= static_cast<std::uint64_t>(key[i + j]) << (8 * j);
    h = (h ^ w) * kPrime;
  }
  return (h ^ size) * kPrime;
}

template <StringOp Op>
std::uint64_t string_kernel(const StringCorpus& corpus, std::uint64_t iterations,
                            std::uint64_t seed) {
  Xorshift64Star rng(seed);
  const std::uint64_t m = corpus.count();
  const std::size_t n = corpus.string_size();
  std::vector<unsigned char> scratch(std::max(kCatBufferBytes, 2 * n + 1));
  std::size_t len = 0;
  std::uint64_t prev = 0;
  std::uint64_t checksum = seed;
  for (std::uint64_t it = 0; it < iterations; ++it) {
    const std::uint64_t r = rng.next();
    const std::uint64_t i = reduce(r ^ prev, m);
    const std::string_view s = corpus.at(i);
    std::uint64_t bits;
    if constexpr (Op == StringOp::kCmp) {
      const std::string_view t = corpus.at(reduce(rotl(r, 32), m));
      const int c = std::memcmp(s.data(), t.data(), n);
      bits = static_cast<std::uint64_t>(static_cast<std::int64_t>((c > 0) - (c < 0)));
    } else if constexpr (Op == StringOp::kCat) {
      if (len + n > kCatBufferBytes) len = 0;
      std::memcpy(scratch.data() + len, s.data(), n);
      len += n;
      bits = (static_cast<std::uint64_t>(len) << 8) | scratch[len - 1];
    } else {
      const std::size_t k = write_key(s, scratch.data());
      bits = key_digest(scratch.data(), k);
    }
    checksum = fold_checksum(checksum, bits);
    prev = bits;
  }
  return checksum;
}

std::uint64_t run_string_kernel(const StringParams& p, const StringCorpus& corpus) {
  switch (p.op) {
    case StringOp::kCmp: return string_kernel<StringOp::kCmp>(corpus, p.iterations, p.seed);
    case StringOp::kCat: return string_kernel<StringOp::kCat>(corpus, p.iterations, p.seed);
    case StringOp::kXfrm: return string_kernel<StringOp::kXfrm>(corpus, p.iterations, p.seed);
  }
  return 0;
}

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 ";

}  // namespace

StringCorpus::StringCorpus(std::size_t string_size, std::uint64_t seed, std::size_t count)
    : size_(string_size) {
  if (string_size == 0 || count == 0) {
    raise(ErrorCode::kInvalidParameter, "string corpus needs a positive size and count");
  }
  Xorshift64Star rng(seed ^ 0x636F72707573ULL);
  std::string base(string_size, ' ');
  for (auto& c : base) c = kAlphabet[rng.below(kAlphabet.size())];
  strings_.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::string s = base;
    for (std::size_t j = rng.below(string_size + 1); j < string_size; ++j) {
      s[j] = kAlphabet[rng.below(kAlphabet.size())];
    }
    strings_.push_back(std::move(s));
  }
}

ComputeOutcome run_arithmetic(const ArithmeticParams& params) {
  require_iterations(params.iterations);
  ComputeOutcome out;
  const std::int64_t start = now_ns();
  out.checksum = run_kernel(params);
  out.elapsed_ns = now_ns() - start;
  out.ops_completed = params.iterations;
  return out;
}

ComputeOutcome run_string(const StringParams& params, const StringCorpus& corpus) {
  require_iterations(params.iterations);
  if (corpus.string_size() != params.string_size) {
    raise(ErrorCode::kInvalidParameter, "corpus holds " + std::to_string(corpus.string_size()) +
                                            "-byte strings, test wants " +
                                            std::to_string(params.string_size));
  }
  ComputeOutcome out;
  const std::int64_t start = now_ns();
  out.checksum = run_string_kernel(params, corpus);
  out.elapsed_ns = now_ns() - start;
  out.ops_completed = params.iterations;
  return out;
}

int compare_op(std::string_view a, std::string_view b) noexcept {
  const int c = a.compare(b);
  return (c > 0) - (c < 0);
}

std::string case_fold(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(fold_byte(static_cast<unsigned char>(c)));
  return out;
}

std::string collation_key(std::string_view s) {
  std::string key(2 * s.size() + 1, '\0');
  write_key(s, reinterpret_cast<unsigned char*>(key.data()));
  return key;
}

std::uint64_t reference_arithmetic(const ArithmeticParams& p) {
  require_iterations(p.iterations);
  Xorshift64Star rng(p.seed);
  std::uint64_t prev = 0;
  std::uint64_t checksum = p.seed;
  for (std::uint64_t i = 0; i < p.iterations; ++i) {
    const std::uint64_t r = rng.next();
    switch (p.type) {
      case DataType::kInt8: {
        const int lhs = static_cast<std::int8_t>(static_cast<std::uint8_t>(r ^ prev));
        const auto raw = static_cast<std::uint8_t>(r >> 32);
        int rhs = p.op == ArithOp::kDiv ? 1 + raw % 127 : static_cast<std::int8_t>(raw);
        int v = 0;
        switch (p.op) {
          case ArithOp::kAdd: v = lhs + rhs; break;
          case ArithOp::kSub: v = lhs - rhs; break;
          case ArithOp::kMul: v = lhs * rhs; break;
          case ArithOp::kDiv: v = lhs / rhs; break;
        }
        prev = static_cast<std::uint8_t>(v & 0xFF);
        checksum = fold_checksum(checksum, prev);
        break;
      }
      case DataType::kFp64: {
        const double lhs = unit_operand(r ^ prev);
        const double rhs = unit_operand(rotl(r, 29));
        double v = 0;
        switch (p.op) {
          case ArithOp::kAdd: v = lhs + rhs; break;
          case ArithOp::kSub: v = lhs - rhs; break;
          case ArithOp::kMul: v = lhs * rhs; break;
          case ArithOp::kDiv: v = lhs / rhs; break;
        }
        prev = std::bit_cast<std::uint64_t>(v);
        checksum = fold_checksum(checksum, prev);
        break;
      }
      case DataType::kInt128: {
        const i128 lhs = static_cast<i128>((static_cast<u128>(r ^ prev) << 64) | rotl(r, 23));
        u128 rhs = (static_cast<u128>(rotl(r, 41)) << 64) | (r * Xorshift64Star::kMultiplier);
        u128 v = 0;
        switch (p.op) {
          case ArithOp::kAdd: v = static_cast<u128>(lhs) + rhs; break;
          case ArithOp::kSub: v = static_cast<u128>(lhs) - rhs; break;
          case ArithOp::kMul: v = static_cast<u128>(lhs) * rhs; break;
          case ArithOp::kDiv:
            rhs = ((static_cast<u128>(rotl(r, 41) >> 33) << 64) |
                   (r * Xorshift64Star::kMultiplier)) | 1;
            v = static_cast<u128>(lhs / static_cast<i128>(rhs));
            break;
        }
        const auto lo = static_cast<std::uint64_t>(v);
        const auto hi = static_cast<std::uint64_t>(v >> 64);
        checksum = fold_checksum(fold_checksum(checksum, lo), hi);
        prev = lo ^ hi;
        break;
      }
    }
  }
  return checksum;
}

std::uint64_t reference_string(const StringParams& p, const StringCorpus& corpus) {
  require_iterations(p.iterations);
  Xorshift64Star rng(p.seed);
  std::uint64_t prev = 0;
  std::uint64_t checksum = p.seed;
  std::string buffer;
  buffer.reserve(kCatBufferBytes);
  for (std::uint64_t it = 0; it < p.iterations; ++it) {
    const std::uint64_t r = rng.next();
    const std::string_view s = corpus.at(reduce(r ^ prev, corpus.count()));
    std::uint64_t bits = 0;
    switch (p.op) {
      case StringOp::kCmp:
        bits = static_cast<std::uint64_t>(
            static_cast<std::int64_t>(compare_op(s, corpus.at(reduce(rotl(r, 32), corpus.count())))));
        break;
      case StringOp::kCat:
        if (buffer.size() + s.size() > kCatBufferBytes) buffer.clear();
        buffer += s;
        bits = (static_cast<std::uint64_t>(buffer.size()) << 8) |
               static_cast<unsigned char>(buffer.back());
        break;
      case StringOp::kXfrm: {
        const std::string key = collation_key(s);
        bits = key_digest(reinterpret_cast<const unsigned char*>(key.data()), key.size());
        break;
      }
    }
    checksum = fold_checksum(checksum, bits);
    prev = bits;
  }
  return checksum;
}

}  // namespace bento::compute
