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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bento/box.hpp"
#include "bento/metrics.hpp"
#include "bento/schema.hpp"
#include "bento/task.hpp"

namespace bento::plugin {

enum class Phase { kPrepare, kRun, kReport, kClean };

std::string_view to_string(Phase phase) noexcept;

/// Parsed `<plugin_dir>/manifest.json`:
///   {"name": ..., "parameters": [{"name", "kind", "values"?, "min"?, "max"?,
///    "default"?, "required"?}], "metrics": [...],
///    "entry_points": {"prepare", "run", "report"?, "clean"}}
struct PluginManifest {
  std::string name;
  std::filesystem::path directory;
  ParameterSchema schema;
  std::vector<std::string> metrics;
  /// Absolute paths; kReport may be missing.
  std::map<Phase, std::filesystem::path> entry_points;
};

/// Parses and checks one plugin directory. Throws InvalidManifest naming the
/// problem (including a missing or non-executable entry point file).
PluginManifest load_manifest(const std::filesystem::path& plugin_dir);

/// One manifest per immediate subdirectory holding a valid manifest.json,
/// sorted by name. Invalid directories append a message to `warnings`.
/// Two plugins declaring the same name throw DuplicateTask.
std::vector<PluginManifest> discover_plugins(const std::filesystem::path& plugin_root,
                                             std::vector<std::string>& warnings);

struct ProcessResult {
  int exit_code = 0;      // 128 + signal when killed by a signal
  int signal = 0;
  bool timed_out = false;
  std::string stderr_tail;  // last 4 KiB
};

/// fork/exec with argv {exe, args...}; stdout goes to `stdout_path` (or
/// /dev/null when empty). The child runs in its own process group, which is
/// killed when `timeout` elapses.
ProcessResult run_process(const std::filesystem::path& exe, const std::vector<std::string>& args,
                          const std::filesystem::path& working_dir,
                          std::chrono::milliseconds timeout,
                          const std::filesystem::path& stdout_path = {});

struct PhaseOutcome {
  int exit_code = 0;
  std::vector<MetricSample> samples;  // run phase only
  std::filesystem::path control_path;
  std::filesystem::path output_path;
  std::int64_t elapsed_ns = 0;
};

/// Writes the control file `{"phase", "params", "metrics", "output_path", ...}`
/// into io_dir and runs the phase's entry point with the control file path as
/// its only argument. For kRun the plugin's MetricSample lines are read back
/// from output_path. Errors: NonZeroExit(code, stderr tail), Timeout,
/// MalformedSample(line), InvalidParameter (run without a test).
PhaseOutcome invoke_plugin_phase(const PluginManifest& manifest, Phase phase,
                                 const TestCase* test, const std::filesystem::path& io_dir,
                                 std::chrono::milliseconds timeout = std::chrono::hours(1),
                                 const Json& extra = Json::object());

TaskDescriptor make_descriptor(const PluginManifest& manifest);

}  // namespace bento::plugin
