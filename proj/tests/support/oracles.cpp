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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace oracle {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t rotl(std::uint64_t v, int s) { return s == 0 ? v : (v << s) | (v >> (64 - s)); }

std::uint64_t mulhi(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t a0 = a & 0xFFFFFFFFu, a1 = a >> 32;
  const std::uint64_t b0 = b & 0xFFFFFFFFu, b1 = b >> 32;
  const std::uint64_t p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
  const std::uint64_t mid = (p00 >> 32) + (p01 & 0xFFFFFFFFu) + (p10 & 0xFFFFFFFFu);
  return p11 + (p01 >> 32) + (p10 >> 32) + (mid >> 32);
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : s_(splitmix(seed)) {
  if (s_ == 0) s_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Rng::next() {
  s_ ^= s_ >> 12;
  s_ ^= s_ << 25;
  s_ ^= s_ >> 27;
  return s_ * 0x2545F4914F6CDD1DULL;
}

double Rng::unit() { return std::ldexp(static_cast<double>(next() >> 11), -53); }

std::uint64_t worker_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix(seed ^ ((index + 1) * 0xD1B54A32D192ED03ULL));
}

std::size_t nearest_rank(std::size_t n, unsigned percent) {
  const std::size_t num = static_cast<std::size_t>(percent) * n;
  std::size_t rank = num / 100 + (num % 100 != 0 ? 1 : 0);
  return std::max<std::size_t>(rank, 1);
}

double percentile(std::vector<double> values, unsigned percent) {
  std::sort(values.begin(), values.end());
  return values.at(nearest_rank(values.size(), percent) - 1);
}

namespace {

std::uint64_t fold(std::uint64_t c, std::uint64_t bits) {
  return (rotl(c, 5) ^ bits) * 0x9E3779B97F4A7C15ULL;
}

// Two's-complement 128-bit value on two limbs.
struct U128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
};

U128 add(U128 a, U128 b) {
  U128 r{a.hi + b.hi, a.lo + b.lo};
  if (r.lo < a.lo) ++r.hi;
  return r;
}

U128 neg(U128 a) { return add(U128{~a.hi, ~a.lo}, U128{0, 1}); }

U128 sub(U128 a, U128 b) { return add(a, neg(b)); }

U128 mul(U128 a, U128 b) {
  U128 r{mulhi(a.lo, b.lo), a.lo * b.lo};
  r.hi += a.hi * b.lo + a.lo * b.hi;
  return r;
}

bool negative(U128 a) { return (a.hi >> 63) != 0; }

bool less(U128 a, U128 b) { return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo; }

U128 shl1(U128 a, unsigned bit) { return U128{(a.hi << 1) | (a.lo >> 63), (a.lo << 1) | bit}; }

// Unsigned long division, one quotient bit per step.
U128 udiv(U128 n, U128 d) {
  U128 q, r;
  for (int i = 127; i >= 0; --i) {
    const unsigned bit = i >= 64 ? (n.hi >> (i - 64)) & 1 : (n.lo >> i) & 1;
    r = shl1(r, bit);
    q = shl1(q, 0);
    if (!less(r, d)) {
      r = sub(r, d);
      q.lo |= 1;
    }
  }
  return q;
}

// Truncating signed division.
U128 sdiv(U128 n, U128 d) {
  const bool nn = negative(n), dn = negative(d);
  U128 q = udiv(nn ? neg(n) : n, dn ? neg(d) : d);
  return nn != dn ? neg(q) : q;
}

double operand(std::uint64_t bits) {
  const std::uint64_t pattern = 0x3FF0000000000000ULL | (bits >> 12);
  double d;
  std::memcpy(&d, &pattern, sizeof d);
  return d;
}

std::uint64_t bits_of(double d) {
  std::uint64_t b;
  std::memcpy(&b, &d, sizeof b);
  return b;
}

}  // namespace

std::uint64_t arithmetic_checksum(Type type, Arith op, std::uint64_t iterations,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t prev = 0;
  std::uint64_t c = seed;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const std::uint64_t r = rng.next();
    if (type == Type::kInt8) {
      const long lhs = static_cast<long>((r ^ prev) & 0xFF) - (((r ^ prev) & 0x80) ? 256 : 0);
      const long raw = static_cast<long>((r >> 32) & 0xFF);
      const long srhs = raw >= 128 ? raw - 256 : raw;
      long v = 0;
      switch (op) {
        case Arith::kAdd: v = lhs + srhs; break;
        case Arith::kSub: v = lhs - srhs; break;
        case Arith::kMul: v = lhs * srhs; break;
        case Arith::kDiv: v = lhs / (1 + raw % 127); break;
      }
      prev = static_cast<std::uint64_t>(v) & 0xFF;
      c = fold(c, prev);
    } else if (type == Type::kFp64) {
      const double a = operand(r ^ prev);
      const double b = operand(rotl(r, 29));
      double v = 0;
      switch (op) {
        case Arith::kAdd: v = a + b; break;
        case Arith::kSub: v = a - b; break;
        case Arith::kMul: v = a * b; break;
        case Arith::kDiv: v = a / b; break;
      }
      prev = bits_of(v);
      c = fold(c, prev);
    } else {
      const U128 a{r ^ prev, rotl(r, 23)};
      const std::uint64_t blo = r * 0x2545F4914F6CDD1DULL;
      U128 v;
      switch (op) {
        case Arith::kAdd: v = add(a, U128{rotl(r, 41), blo}); break;
        case Arith::kSub: v = sub(a, U128{rotl(r, 41), blo}); break;
        case Arith::kMul: v = mul(a, U128{rotl(r, 41), blo}); break;
        case Arith::kDiv: v = sdiv(a, U128{rotl(r, 41) >> 33, blo | 1}); break;
      }
      c = fold(fold(c, v.lo), v.hi);
      prev = v.lo ^ v.hi;
    }
  }
  return c;
}

std::vector<std::string> string_corpus(std::size_t size, std::uint64_t seed, std::size_t count) {
  static const std::string alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 ";
  Rng rng(seed ^ 0x636F72707573ULL);
  std::string base;
  for (std::size_t i = 0; i < size; ++i) base.push_back(alphabet[rng.below(alphabet.size())]);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::string s = base;
    for (std::size_t j = rng.below(size + 1); j < size; ++j) s[j] = alphabet[rng.below(alphabet.size())];
    out.push_back(s);
  }
  return out;
}

namespace {

std::string collation(const std::string& s) {
  std::string primary, tertiary;
  for (unsigned char c : s) {
    const bool upper = c >= 'A' && c <= 'Z';
    const unsigned char f = upper ? static_cast<unsigned char>(c - 'A' + 'a') : c;
    unsigned char w = f;
    if (f >= '0' && f <= '9') w = static_cast<unsigned char>(0x10 + f - '0');
    if (f >= 'a' && f <= 'z') w = static_cast<unsigned char>(0x20 + f - 'a');
    if (f == ' ') w = 0x08;
    primary.push_back(static_cast<char>(w));
    tertiary.push_back(upper ? '\x02' : '\x01');
  }
  return primary + '\x01' + tertiary;
}

}  // namespace

namespace {

// FNV-1a over zero-padded little-endian 8-byte words, then the length.
std::uint64_t word_fnv(std::string bytes) {
  const std::uint64_t size = bytes.size();
  bytes.resize((bytes.size() + 7) / 8 * 8, '\0');
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < bytes.size(); i += 8) {
    std::uint64_t w = 0;
    for (int j = 7; j >= 0; --j) w = (w << 8) | static_cast<unsigned char>(bytes[i + j]);
    h = (h ^ w) * 0x100000001B3ULL;
  }
  return (h ^ size) * 0x100000001B3ULL;
}

}  // namespace

std::uint64_t string_checksum(const std::vector<std::string>& corpus, Str op,
                              std::uint64_t iterations, std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t prev = 0;
  std::uint64_t c = seed;
  std::string buffer;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const std::uint64_t r = rng.next();
    const std::string& s = corpus[mulhi(r ^ prev, corpus.size())];
    std::uint64_t bits = 0;
    if (op == Str::kCmp) {
      const std::string& t = corpus[mulhi(rotl(r, 32), corpus.size())];
      bits = s < t ? ~0ULL : (s == t ? 0 : 1);
    } else if (op == Str::kCat) {
      if (buffer.size() + s.size() > 64 * 1024) buffer.clear();
      buffer += s;
      bits = (static_cast<std::uint64_t>(buffer.size()) << 8) |
             static_cast<unsigned char>(buffer.back());
    } else {
      bits = word_fnv(collation(s));
    }
    c = fold(c, bits);
    prev = bits;
  }
  return c;
}

std::uint64_t memory_word(std::uint64_t seed, std::uint64_t index) {
  return splitmix(seed) ^ (index * 0x9E3779B97F4A7C15ULL);
}

std::vector<unsigned char> net_message(std::uint64_t size, std::uint64_t seed, unsigned conn,
                                       std::uint64_t seq) {
  std::vector<unsigned char> m(size);
  Rng rng(worker_seed(seed, conn));
  for (std::size_t i = 8; i < size; i += 8) {
    const std::uint64_t w = rng.next();
    for (std::size_t b = 0; b < 8 && i + b < size; ++b) m[i + b] = static_cast<unsigned char>(w >> (8 * b));
  }
  for (std::size_t b = 0; b < 8 && b < size; ++b) m[b] = static_cast<unsigned char>(seq >> (8 * b));
  return m;
}

std::uint64_t host_partition_size(std::uint64_t records, std::uint64_t host, std::uint64_t dpu) {
  std::uint64_t b = 0;
  // records * host can exceed 64 bits only for absurd inputs; tests stay small.
  while ((b + 1) * (host + dpu) <= records * host) ++b;
  return b;
}

Zipf::Zipf(std::uint64_t n, double theta, std::uint64_t seed)
    : n_(n), theta_(theta), rng_(seed) {
  zetan_ = 0;
  for (std::uint64_t i = 1; i <= n_; ++i) zetan_ += 1.0 / std::pow(static_cast<double>(i), theta_);
  double zeta2 = 0;
  for (std::uint64_t i = 1; i <= 2; ++i) zeta2 += 1.0 / std::pow(static_cast<double>(i), theta_);
  alpha_ = 1.0 / (1.0 - theta_);
  eta_ = (1.0 - std::pow(2.0 / static_cast<double>(n_), 1.0 - theta_)) / (1.0 - zeta2 / zetan_);
  two_ = 1.0 + std::pow(0.5, theta_);
}

std::uint64_t Zipf::next() {
  const double u = rng_.unit();
  const double uz = u * zetan_;
  if (uz < 1.0) return 0;
  if (uz < two_) return n_ > 1 ? 1 : 0;
  const auto r = static_cast<std::uint64_t>(static_cast<double>(n_) *
                                            std::pow(eta_ * u - eta_ + 1.0, alpha_));
  return r < n_ ? r : n_ - 1;
}

std::vector<unsigned char> index_value(std::uint64_t seed, std::uint64_t key,
                                       std::uint64_t version, std::uint64_t size) {
  std::vector<unsigned char> v(size);
  for (std::size_t b = 0; b < 8 && b < size; ++b) v[b] = static_cast<unsigned char>(version >> (8 * b));
  Rng rng(splitmix(seed ^ splitmix(key) ^ splitmix(version)));
  for (std::size_t i = 8; i < size; i += 8) {
    const std::uint64_t w = rng.next();
    for (std::size_t b = 0; b < 8 && i + b < size; ++b) v[i + b] = static_cast<unsigned char>(w >> (8 * b));
  }
  return v;
}

std::uint64_t prefix_key_digest(std::uint64_t count) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::uint64_t k = 0; k < count; ++k) {
    unsigned char le[8];
    for (int b = 0; b < 8; ++b) le[b] = static_cast<unsigned char>(k >> (8 * b));
    h = fnv1a(le, 8, h);
  }
  return h;
}

std::vector<OpRow> read_oplog(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<OpRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    OpRow r;
    fields >> r.worker >> r.offset >> r.size >> r.submit_ns >> r.complete_ns >> r.result;
    if (!fields) throw std::runtime_error("bad op log line: " + line);
    rows.push_back(r);
  }
  return rows;
}

std::uint64_t directory_digest(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  std::vector<fs::path> entries;
  for (const auto& e : fs::recursive_directory_iterator(dir)) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& p : entries) {
    const std::string rel = fs::relative(p, dir).string();
    h = fnv1a(rel.data(), rel.size(), h);
    if (fs::is_regular_file(p)) {
      std::ifstream in(p, std::ios::binary);
      const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      h = fnv1a(body.data(), body.size(), h);
    }
  }
  return h;
}

}  // namespace oracle
