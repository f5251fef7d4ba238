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

#include "bento/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bento/error.hpp"
#include "bento/util.hpp"

namespace bento {

std::string_view to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::kInteger: return "integer";
    case ValueKind::kSize: return "size";
    case ValueKind::kReal: return "real";
    case ValueKind::kEnum: return "enum";
    case ValueKind::kString: return "string";
  }
  return "unknown";
}

ParameterSpec ParameterSpec::integer(std::string name, std::int64_t lo, std::int64_t hi,
                                     Json default_value) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ValueKind::kInteger;
  s.min_int = lo;
  s.max_int = hi;
  s.default_value = std::move(default_value);
  return s;
}

ParameterSpec ParameterSpec::size(std::string name, std::uint64_t lo, std::uint64_t hi,
                                  Json default_value) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ValueKind::kSize;
  s.min_int = static_cast<std::int64_t>(lo);
  s.max_int = static_cast<std::int64_t>(std::min<std::uint64_t>(hi, INT64_MAX));
  s.default_value = std::move(default_value);
  return s;
}

ParameterSpec ParameterSpec::real(std::string name, double lo, double hi, Json default_value) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ValueKind::kReal;
  s.min_real = lo;
  s.max_real = hi;
  s.default_value = std::move(default_value);
  return s;
}

ParameterSpec ParameterSpec::enumeration(std::string name, std::vector<std::string> choices,
                                         Json default_value) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ValueKind::kEnum;
  s.choices = std::move(choices);
  s.default_value = std::move(default_value);
  return s;
}

ParameterSpec ParameterSpec::string(std::string name, Json default_value) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ValueKind::kString;
  s.default_value = std::move(default_value);
  return s;
}

ParameterSchema::ParameterSchema(std::vector<ParameterSpec> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.name).second) {
      raise(ErrorCode::kInvalidValue, "duplicate parameter name '" + e.name + "' in schema");
    }
    for (const auto& a : e.aliases) {
      if (!seen.insert(a).second) {
        raise(ErrorCode::kInvalidValue, "duplicate parameter alias '" + a + "' in schema");
      }
    }
    if (!e.default_value.is_null()) {
      normalize(e, e.default_value, "schema." + e.name + ".default");
    }
  }
}

const ParameterSpec* ParameterSchema::find(std::string_view name) const noexcept {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
    if (std::find(e.aliases.begin(), e.aliases.end(), name) != e.aliases.end()) return &e;
  }
  return nullptr;
}

namespace {

[[noreturn]] void bad_value(const std::string& path, const Json& value, const std::string& why) {
  raise(ErrorCode::kInvalidValue, path + " = " + value.dump() + ": " + why);
}

std::int64_t check_range(const ParameterSpec& spec, std::int64_t v, const std::string& path,
                         const Json& value) {
  if (v < spec.min_int || v > spec.max_int) {
    bad_value(path, value,
              "out of range [" + std::to_string(spec.min_int) + ", " +
                  std::to_string(spec.max_int) + "]");
  }
  return v;
}

}  // namespace

Json ParameterSchema::normalize(const ParameterSpec& spec, const Json& value,
                                const std::string& path) {
  switch (spec.kind) {
    case ValueKind::kInteger: {
      if (value.is_number_integer()) {
        if (value.is_number_unsigned() && value.get<std::uint64_t>() > INT64_MAX) {
          bad_value(path, value, "integer overflow");
        }
        return check_range(spec, value.get<std::int64_t>(), path, value);
      }
      if (value.is_number_float()) {
        double d = value.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9.0e18) {
          return check_range(spec, static_cast<std::int64_t>(d), path, value);
        }
      }
      bad_value(path, value, "expected an integer");
    }
    case ValueKind::kSize: {
      std::optional<std::uint64_t> bytes;
      if (value.is_number_unsigned()) {
        bytes = value.get<std::uint64_t>();
      } else if (value.is_number_integer()) {
        if (value.get<std::int64_t>() >= 0) bytes = value.get<std::int64_t>();
      } else if (value.is_string()) {
        bytes = parse_size(value.get<std::string>());
      }
      if (!bytes || *bytes > INT64_MAX) {
        bad_value(path, value, "expected a byte size such as 4096 or \"8KB\"");
      }
      return check_range(spec, static_cast<std::int64_t>(*bytes), path, value);
    }
    case ValueKind::kReal: {
      if (!value.is_number()) bad_value(path, value, "expected a number");
      double d = value.get<double>();
      if (!std::isfinite(d) || d < spec.min_real || d > spec.max_real) {
        bad_value(path, value,
                  "out of range [" + Json(spec.min_real).dump() + ", " +
                      Json(spec.max_real).dump() + "]");
      }
      return d;
    }
    case ValueKind::kEnum: {
      if (value.is_boolean()) return normalize(spec, Json(value.get<bool>() ? "true" : "false"), path);
      if (!value.is_string()) bad_value(path, value, "expected a string");
      const auto& s = value.get_ref<const std::string&>();
      if (std::find(spec.choices.begin(), spec.choices.end(), s) == spec.choices.end()) {
        std::string allowed;
        for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : ", ") + c;
        bad_value(path, value, "expected one of {" + allowed + "}");
      }
      return s;
    }
    case ValueKind::kString: {
      if (!value.is_string()) bad_value(path, value, "expected a string");
      const auto& s = value.get_ref<const std::string&>();
      if (spec.string_check && !spec.string_check(s)) bad_value(path, value, "malformed");
      return s;
    }
  }
  bad_value(path, value, "unsupported kind");
}

Json ParameterSchema::to_json() const {
  Json out = Json::array();
  for (const auto& e : entries_) {
    Json j = {{"name", e.name}, {"kind", std::string(to_string(e.kind))},
              {"required", e.required}, {"default", e.default_value}};
    if (e.kind == ValueKind::kInteger || e.kind == ValueKind::kSize) {
      j["min"] = e.min_int;
      j["max"] = e.max_int;
    } else if (e.kind == ValueKind::kReal) {
      j["min"] = e.min_real;
      j["max"] = e.max_real;
    } else if (e.kind == ValueKind::kEnum) {
      j["values"] = e.choices;
    }
    if (!e.aliases.empty()) j["aliases"] = e.aliases;
    if (!e.description.empty()) j["description"] = e.description;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace bento
