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
#include <span>
#include <string>
#include <vector>

#include "bento/box.hpp"
#include "bento/metrics.hpp"
#include "bento/registry.hpp"
#include "bento/task.hpp"

namespace bento {

inline constexpr const char* kHarnessVersion = "0.3.0";
inline constexpr const char* kReportFileName = "report.json";

/// Runs every task of the box in order. Per task: prepare once (lazily,
/// right before its first test), then each test sequentially in test_id
/// order, then report. Clean is never called here. A failing prepare/run/
/// report is recorded in the returned report and execution continues.
/// Writes `<workspace>/<task>/<test_id>/{samples.jsonl,meta.json,status.json}`
/// and `<workspace>/report.json`.
RunReport execute_box(const MeasurementBox& box, const Registry& registry,
                      const std::filesystem::path& workspace, const RunOptions& options = {});

/// Invokes each task's clean phase, then deletes its registered artifacts and
/// its workspace directory. Idempotent. Unknown names throw UnknownTask
/// before anything is cleaned; per-task failures are collected and thrown
/// together as CleanFailed after every task has been attempted.
void clean(const Registry& registry, std::span<const std::string> task_names,
           const std::filesystem::path& workspace, const RunOptions& options = {});

/// Registered tasks (built-ins plus plugins), sorted by name.
std::vector<const TaskDescriptor*> list_tasks(const Registry& registry);

/// Re-aggregates an executed box from the logs in `workspace`.
RunReport aggregate(const std::filesystem::path& workspace, const MeasurementBox& box,
                    const Registry& registry);

}  // namespace bento
