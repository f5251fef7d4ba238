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
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace bento {

using Json = nlohmann::json;

enum class ValueKind {
  kInteger,  // signed 64-bit, inclusive [min_int, max_int]
  kSize,     // bytes; raw integer or "8KB"-style string, inclusive range
  kReal,     // double, inclusive [min_real, max_real]
  kEnum,     // one of `choices`
  kString,   // free-form, optionally checked by `string_check`
};

std::string_view to_string(ValueKind kind) noexcept;

struct ParameterSpec {
  std::string name;
  ValueKind kind = ValueKind::kInteger;
  bool required = false;
  /// Null means "no default": an optional parameter the user did not set is
  /// simply absent from the test assignment.
  Json default_value;
  std::int64_t min_int = std::numeric_limits<std::int64_t>::min();
  std::int64_t max_int = std::numeric_limits<std::int64_t>::max();
  double min_real = -std::numeric_limits<double>::infinity();
  double max_real = std::numeric_limits<double>::infinity();
  std::vector<std::string> choices;
  std::vector<std::string> aliases;
  std::function<bool(std::string_view)> string_check;
  std::string description;

  static ParameterSpec integer(std::string name, std::int64_t lo, std::int64_t hi,
                               Json default_value = nullptr);
  static ParameterSpec size(std::string name, std::uint64_t lo, std::uint64_t hi,
                            Json default_value = nullptr);
  static ParameterSpec real(std::string name, double lo, double hi,
                            Json default_value = nullptr);
  static ParameterSpec enumeration(std::string name, std::vector<std::string> choices,
                                   Json default_value = nullptr);
  static ParameterSpec string(std::string name, Json default_value = nullptr);

  ParameterSpec& require() {
    required = true;
    return *this;
  }
  ParameterSpec& alias(std::string other) {
    aliases.push_back(std::move(other));
    return *this;
  }
  ParameterSpec& describe(std::string text) {
    description = std::move(text);
    return *this;
  }
  ParameterSpec& check(std::function<bool(std::string_view)> fn) {
    string_check = std::move(fn);
    return *this;
  }
};

class ParameterSchema {
 public:
  ParameterSchema() = default;
  /// Throws InvalidValue on duplicate names/aliases or a default that
  /// violates its own constraint.
  explicit ParameterSchema(std::vector<ParameterSpec> entries);

  /// Lookup by canonical name or alias.
  const ParameterSpec* find(std::string_view name) const noexcept;
  std::span<const ParameterSpec> entries() const noexcept { return entries_; }

  /// Converts a user-supplied value to its canonical JSON form (sizes become
  /// byte counts). Throws InvalidValue naming `path` when out of range.
  static Json normalize(const ParameterSpec& spec, const Json& value,
                        const std::string& path);

  Json to_json() const;

 private:
  std::vector<ParameterSpec> entries_;
};

}  // namespace bento
