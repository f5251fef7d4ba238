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

#include "bento/box.hpp"

#include <algorithm>

#include "bento/error.hpp"
#include "bento/registry.hpp"

namespace bento {

bool TestCase::has(std::string_view name) const {
  return assignment.find(std::string(name)) != assignment.end();
}

const Json& TestCase::at(std::string_view name) const {
  auto it = assignment.find(std::string(name));
  if (it == assignment.end()) {
    raise(ErrorCode::kInvalidParameter,
          "test " + std::to_string(test_id) + " has no parameter '" + std::string(name) + "'");
  }
  return it->second;
}

std::int64_t TestCase::get_int(std::string_view name) const {
  const Json& v = at(name);
  if (!v.is_number()) {
    raise(ErrorCode::kInvalidParameter, "parameter '" + std::string(name) + "' is not numeric");
  }
  return v.get<std::int64_t>();
}

double TestCase::get_real(std::string_view name) const {
  const Json& v = at(name);
  if (!v.is_number()) {
    raise(ErrorCode::kInvalidParameter, "parameter '" + std::string(name) + "' is not numeric");
  }
  return v.get<double>();
}

const std::string& TestCase::get_string(std::string_view name) const {
  const Json& v = at(name);
  if (!v.is_string()) {
    raise(ErrorCode::kInvalidParameter, "parameter '" + std::string(name) + "' is not a string");
  }
  return v.get_ref<const std::string&>();
}

std::int64_t TestCase::get_int(std::string_view name, std::int64_t fallback) const {
  return has(name) ? get_int(name) : fallback;
}

double TestCase::get_real(std::string_view name, double fallback) const {
  return has(name) ? get_real(name) : fallback;
}

std::string TestCase::get_string(std::string_view name, std::string fallback) const {
  return has(name) ? get_string(name) : fallback;
}

Json TestCase::params_json() const {
  Json j = Json::object();
  for (const auto& [k, v] : assignment) j[k] = v;
  return j;
}

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

TaskInvocation parse_invocation(const Json& entry, const std::string& path,
                                const Registry& registry) {
  if (!entry.is_object()) raise(ErrorCode::kSyntax, path + ": expected an object");
  for (auto it = entry.begin(); it != entry.end(); ++it) {
    if (it.key() != "task_name" && it.key() != "parameters" && it.key() != "metrics") {
      raise(ErrorCode::kSyntax, path + "." + it.key() + ": unexpected key");
    }
  }
  auto name_it = entry.find("task_name");
  if (name_it == entry.end() || !name_it->is_string()) {
    raise(ErrorCode::kSyntax, path + ".task_name: expected a string");
  }
  TaskInvocation inv;
  inv.task_name = name_it->get<std::string>();
  const TaskDescriptor* task = registry.find(inv.task_name);
  if (task == nullptr) {
    raise(ErrorCode::kUnknownTask, path + ".task_name: \"" + inv.task_name + "\"");
  }

  if (auto params = entry.find("parameters"); params != entry.end()) {
    if (!params->is_object()) raise(ErrorCode::kSyntax, path + ".parameters: expected an object");
    for (auto it = params->begin(); it != params->end(); ++it) {
      const std::string ppath = path + ".parameters." + it.key();
      const ParameterSpec* spec = task->schema.find(it.key());
      if (spec == nullptr) {
        raise(ErrorCode::kUnknownParameter,
              ppath + ": task '" + inv.task_name + "' has no parameter '" + it.key() + "'");
      }
      if (inv.parameters.count(spec->name) != 0) {
        raise(ErrorCode::kInvalidValue,
              ppath + ": parameter '" + spec->name + "' given more than once (via alias)");
      }
      const Json values = it->is_array() ? *it : Json::array({*it});
      if (values.empty()) raise(ErrorCode::kInvalidValue, ppath + ": empty value list");
      std::vector<Json> normalized;
      for (std::size_t i = 0; i < values.size(); ++i) {
        normalized.push_back(ParameterSchema::normalize(
            *spec, values[i], ppath + "[" + std::to_string(i) + "]"));
      }
      inv.parameters.emplace(spec->name, std::move(normalized));
    }
  }
  for (const auto& spec : task->schema.entries()) {
    if (spec.required && inv.parameters.count(spec.name) == 0 && spec.default_value.is_null()) {
      raise(ErrorCode::kInvalidValue,
            path + ".parameters." + spec.name + ": required parameter missing");
    }
  }

  auto metrics = entry.find("metrics");
  if (metrics == entry.end() || !metrics->is_array() || metrics->empty()) {
    raise(ErrorCode::kSyntax, path + ".metrics: expected a non-empty array of metric names");
  }
  for (std::size_t i = 0; i < metrics->size(); ++i) {
    const std::string mpath = path + ".metrics[" + std::to_string(i) + "]";
    const Json& m = (*metrics)[i];
    if (!m.is_string()) raise(ErrorCode::kSyntax, mpath + ": expected a string");
    const auto& name = m.get_ref<const std::string&>();
    const bool known = std::any_of(task->metrics.begin(), task->metrics.end(),
                                   [&](const MetricSpec& s) { return s.name == name; });
    if (!known) {
      raise(ErrorCode::kUnknownMetric,
            mpath + ": task '" + inv.task_name + "' cannot produce \"" + name + "\"");
    }
    if (std::find(inv.metrics.begin(), inv.metrics.end(), name) != inv.metrics.end()) {
      raise(ErrorCode::kInvalidValue, mpath + ": metric \"" + name + "\" listed twice");
    }
    inv.metrics.push_back(name);
  }
  return inv;
}

}  // namespace

MeasurementBox parse_box(std::string_view text, const Registry& registry) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    raise(ErrorCode::kSyntax, "line " + std::to_string(line) + ", column " +
                                  std::to_string(column) + ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) raise(ErrorCode::kSyntax, "$: expected a JSON object");
  auto tasks = doc.find("tasks");
  if (tasks == doc.end() || !tasks->is_array()) {
    raise(ErrorCode::kSyntax, "$.tasks: expected an array");
  }
  if (tasks->empty()) raise(ErrorCode::kEmptyBox, "$.tasks: empty task list");

  MeasurementBox box;
  for (std::size_t i = 0; i < tasks->size(); ++i) {
    box.tasks.push_back(
        parse_invocation((*tasks)[i], "$.tasks[" + std::to_string(i) + "]", registry));
  }
  return box;
}

std::vector<TestCase> expand_tests(const TaskInvocation& invocation,
                                   const ParameterSchema& schema,
                                   std::uint64_t first_test_id) {
  // Merge user lists with single-valued defaults; std::map keeps names sorted.
  std::map<std::string, std::vector<Json>> axes = invocation.parameters;
  for (const auto& spec : schema.entries()) {
    if (axes.count(spec.name) == 0 && !spec.default_value.is_null()) {
      axes.emplace(spec.name, std::vector<Json>{
                                  ParameterSchema::normalize(spec, spec.default_value, spec.name)});
    }
  }

  std::vector<std::pair<const std::string*, const std::vector<Json>*>> dims;
  std::size_t total = 1;
  for (const auto& [name, values] : axes) {
    dims.emplace_back(&name, &values);
    total *= values.size();
  }

  std::vector<TestCase> tests;
  tests.reserve(total);
  std::vector<std::size_t> digit(dims.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    TestCase tc;
    tc.task_name = invocation.task_name;
    tc.metrics = invocation.metrics;
    tc.test_id = first_test_id + n;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      tc.assignment.emplace(*dims[d].first, (*dims[d].second)[digit[d]]);
    }
    tests.push_back(std::move(tc));
    for (std::size_t d = dims.size(); d-- > 0;) {
      if (++digit[d] < dims[d].second->size()) break;
      digit[d] = 0;
    }
  }
  return tests;
}

std::vector<TestCase> expand_box(const MeasurementBox& box, const Registry& registry) {
  std::vector<TestCase> all;
  for (const auto& inv : box.tasks) {
    auto tests = expand_tests(inv, registry.at(inv.task_name).schema, all.size());
    all.insert(all.end(), std::make_move_iterator(tests.begin()),
               std::make_move_iterator(tests.end()));
  }
  return all;
}

}  // namespace bento
