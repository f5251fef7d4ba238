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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bento/task.hpp"

namespace bento {

class Registry {
 public:
  Registry() = default;

  /// compute, memory, storage, net_tcp, pred_pushdown, index_offload.
  static Registry with_builtins();

  /// Throws DuplicateTask when the name is taken, InvalidValue when the
  /// descriptor lacks a factory.
  void add(TaskDescriptor descriptor);

  /// Registers every valid plugin under `plugin_root`; invalid plugin
  /// directories become warnings. Returns the number added.
  std::size_t discover_plugins(const std::filesystem::path& plugin_root);

  const TaskDescriptor* find(std::string_view name) const noexcept;
  /// Throws UnknownTask.
  const TaskDescriptor& at(std::string_view name) const;

  /// Sorted by name.
  std::vector<const TaskDescriptor*> list() const;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  std::map<std::string, TaskDescriptor, std::less<>> tasks_;
  std::vector<std::string> warnings_;
};

}  // namespace bento
