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
#include <string>
#include <string_view>
#include <vector>

#include "bento/schema.hpp"

namespace bento {

class Registry;

/// One entry of a box's "tasks" array. Parameter names are canonical (aliases
/// resolved) and values normalized; each list keeps the user's order.
struct TaskInvocation {
  std::string task_name;
  std::map<std::string, std::vector<Json>> parameters;
  std::vector<std::string> metrics;
};

struct MeasurementBox {
  std::vector<TaskInvocation> tasks;
};

/// One concrete parameter assignment of a task.
struct TestCase {
  std::string task_name;
  std::map<std::string, Json> assignment;
  std::vector<std::string> metrics;
  std::uint64_t test_id = 0;

  bool has(std::string_view name) const;
  // These throw InvalidParameter when the parameter is absent.
  const Json& at(std::string_view name) const;
  std::int64_t get_int(std::string_view name) const;
  double get_real(std::string_view name) const;
  const std::string& get_string(std::string_view name) const;

  std::int64_t get_int(std::string_view name, std::int64_t fallback) const;
  double get_real(std::string_view name, double fallback) const;
  std::string get_string(std::string_view name, std::string fallback) const;

  Json params_json() const;
};

/// Parses and validates a box document against the registry's schemas.
/// Errors: SyntaxError (with line/column), EmptyBox, UnknownTask,
/// UnknownParameter, UnknownMetric, InvalidValue; each names the JSON path.
MeasurementBox parse_box(std::string_view text, const Registry& registry);

/// Cross product of the invocation's parameter lists in odometer order over
/// parameter names sorted ascending (the last name varies fastest). Schema
/// defaults fill parameters the user left out. Metrics are attached to every
/// test, never crossed. test_ids are first_test_id, first_test_id + 1, ...
std::vector<TestCase> expand_tests(const TaskInvocation& invocation,
                                   const ParameterSchema& schema,
                                   std::uint64_t first_test_id = 0);

/// Expansion of every invocation of the box; test_ids are unique box-wide.
std::vector<TestCase> expand_box(const MeasurementBox& box, const Registry& registry);

}  // namespace bento
