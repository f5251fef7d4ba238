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

namespace bento {

/// SplitMix64 finalizer. Used for seeding and as the rolling checksum mix.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// xorshift64* generator. Every seeded stream in the harness (operands,
/// access indices, file contents, key streams) is drawn from this type, so
/// the sequences are reproducible across platforms and builds.
///
/// The initial state is mix64(seed); a zero state (which would make the
/// generator stick at zero) is replaced by a fixed odd constant.
class Xorshift64Star {
 public:
  static constexpr std::uint64_t kMultiplier = 0x2545F4914F6CDD1DULL;
  static constexpr std::uint64_t kZeroStateFallback = 0x9E3779B97F4A7C15ULL;

  constexpr explicit Xorshift64Star(std::uint64_t seed) noexcept
      : state_(mix64(seed)) {
    if (state_ == 0) state_ = kZeroStateFallback;
  }

  constexpr std::uint64_t next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * kMultiplier;
  }

  /// Multiplicative range reduction into [0, bound). bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Seed for worker `index` derived from a task-level seed.
constexpr std::uint64_t worker_seed(std::uint64_t seed,
                                    std::uint64_t index) noexcept {
  return mix64(seed ^ ((index + 1) * 0xD1B54A32D192ED03ULL));
}

}  // namespace bento
