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

#include "bento/registry.hpp"

#include "bento/error.hpp"
#include "bento/plugin.hpp"
#include "bento/tasks.hpp"

namespace bento {

Registry Registry::with_builtins() {
  Registry r;
  r.add(tasks::compute_descriptor());
  r.add(tasks::memory_descriptor());
  r.add(tasks::storage_descriptor());
  r.add(tasks::network_descriptor());
  r.add(tasks::pushdown_descriptor());
  r.add(tasks::index_descriptor());
  return r;
}

void Registry::add(TaskDescriptor descriptor) {
  if (!descriptor.factory) {
    raise(ErrorCode::kInvalidValue, "task '" + descriptor.name + "' has no lifecycle factory");
  }
  if (tasks_.count(descriptor.name) != 0) {
    raise(ErrorCode::kDuplicateTask, "task name '" + descriptor.name + "' already registered");
  }
  std::string name = descriptor.name;
  tasks_.emplace(std::move(name), std::move(descriptor));
}

std::size_t Registry::discover_plugins(const std::filesystem::path& plugin_root) {
  auto manifests = plugin::discover_plugins(plugin_root, warnings_);
  // Validate the whole batch before registering any of it.
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    if (tasks_.count(manifests[i].name) != 0) {
      raise(ErrorCode::kDuplicateTask, "plugin '" + manifests[i].name + "' in " +
                                           manifests[i].directory.string() +
                                           " collides with a registered task");
    }
  }
  for (auto& m : manifests) add(plugin::make_descriptor(m));
  return manifests.size();
}

const TaskDescriptor* Registry::find(std::string_view name) const noexcept {
  auto it = tasks_.find(name);
  return it == tasks_.end() ? nullptr : &it->second;
}

const TaskDescriptor& Registry::at(std::string_view name) const {
  const TaskDescriptor* d = find(name);
  if (d == nullptr) raise(ErrorCode::kUnknownTask, "\"" + std::string(name) + "\"");
  return *d;
}

std::vector<const TaskDescriptor*> Registry::list() const {
  std::vector<const TaskDescriptor*> out;
  out.reserve(tasks_.size());
  for (const auto& [name, d] : tasks_) out.push_back(&d);
  return out;
}

}  // namespace bento
