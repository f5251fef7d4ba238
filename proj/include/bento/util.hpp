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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace bento {

/// Monotonic nanoseconds. The single clock source for all measurements.
inline std::int64_t now_ns() noexcept {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// Parses "4096", "8KB", "8 KiB", "4MB", "1GB" (binary multiples). Returns
/// nullopt for anything else, including overflow.
std::optional<std::uint64_t> parse_size(std::string_view text);

/// Inverse of parse_size for display ("16KB", "4MB", or raw bytes).
std::string format_size(std::uint64_t bytes);

/// FNV-1a over a byte range; used for directory and payload digests.
std::uint64_t fnv1a(std::span<const std::byte> bytes,
                    std::uint64_t seed = 0xCBF29CE484222325ULL) noexcept;
std::uint64_t fnv1a(std::string_view text,
                    std::uint64_t seed = 0xCBF29CE484222325ULL) noexcept;

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

std::string hostname();
std::string iso8601_utc_now();
std::string hex64(std::uint64_t value);

/// Attempts to pin the calling thread to `cpu` (modulo the CPU count).
/// Returns false when the platform refuses.
bool pin_current_thread(unsigned cpu) noexcept;
unsigned available_cpus() noexcept;

}  // namespace bento
