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

#include "bento/util.hpp"

#include <pthread.h>
#include <sched.h>
#include <unistd.h>

#include <cctype>
#include <charconv>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "bento/error.hpp"

namespace bento {

std::optional<std::uint64_t> parse_size(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  std::uint64_t number = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), number);
  if (ec != std::errc{}) return std::nullopt;
  std::string_view suffix(ptr, text.data() + text.size() - ptr);
  while (!suffix.empty() && suffix.front() == ' ') suffix.remove_prefix(1);

  std::string unit;
  for (char c : suffix) unit.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  std::uint64_t multiplier = 0;
  if (unit.empty() || unit == "B") {
    multiplier = 1;
  } else if (unit == "K" || unit == "KB" || unit == "KIB") {
    multiplier = 1ULL << 10;
  } else if (unit == "M" || unit == "MB" || unit == "MIB") {
    multiplier = 1ULL << 20;
  } else if (unit == "G" || unit == "GB" || unit == "GIB") {
    multiplier = 1ULL << 30;
  } else if (unit == "T" || unit == "TB" || unit == "TIB") {
    multiplier = 1ULL << 40;
  } else {
    return std::nullopt;
  }
  if (number != 0 && multiplier > UINT64_MAX / number) return std::nullopt;
  return number * multiplier;
}

std::string format_size(std::uint64_t bytes) {
  static constexpr const char* kUnits[] = {"TB", "GB", "MB", "KB"};
  static constexpr int kShifts[] = {40, 30, 20, 10};
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t unit = 1ULL << kShifts[i];
    if (bytes >= unit && bytes % unit == 0) {
      return std::to_string(bytes / unit) + kUnits[i];
    }
  }
  return std::to_string(bytes);
}

std::uint64_t fnv1a(std::span<const std::byte> bytes, std::uint64_t seed) noexcept {
  std::uint64_t h = seed;
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) noexcept {
  return fnv1a(std::as_bytes(std::span(text.data(), text.size())), seed);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) raise(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(ErrorCode::kIo, "rename " + tmp.string() + ": " + ec.message());
}

std::string hostname() {
  char buf[256] = {};
  if (::gethostname(buf, sizeof(buf) - 1) != 0) return "unknown";
  return buf;
}

std::string iso8601_utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

unsigned available_cpus() noexcept {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

bool pin_current_thread(unsigned cpu) noexcept {
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu % available_cpus(), &set);
  return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
}

}  // namespace bento
