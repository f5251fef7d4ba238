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

#include "bento/plugin.hpp"

#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>

#include "bento/error.hpp"
#include "bento/util.hpp"

namespace fs = std::filesystem;

namespace bento::plugin {

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::kPrepare: return "prepare";
    case Phase::kRun: return "run";
    case Phase::kReport: return "report";
    case Phase::kClean: return "clean";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad_manifest(const fs::path& dir, const std::string& why) {
  raise(ErrorCode::kInvalidManifest, dir.string() + ": " + why);
}

bool valid_identifier(const std::string& s) {
  static const std::regex re("[A-Za-z_][A-Za-z0-9_\\-]*");
  return std::regex_match(s, re);
}

ParameterSpec parse_parameter(const Json& p, const fs::path& dir, std::size_t index) {
  const std::string where = "parameters[" + std::to_string(index) + "]";
  if (!p.is_object() || !p.contains("name") || !p["name"].is_string() || !p.contains("kind") ||
      !p["kind"].is_string()) {
    bad_manifest(dir, where + ": needs string fields 'name' and 'kind'");
  }
  const std::string name = p["name"].get<std::string>();
  const std::string kind = p["kind"].get<std::string>();
  const Json def = p.value("default", Json(nullptr));

  ParameterSpec spec;
  if (kind == "integer") {
    spec = ParameterSpec::integer(name, p.value("min", INT64_MIN), p.value("max", INT64_MAX), def);
  } else if (kind == "size") {
    spec = ParameterSpec::size(name, p.value("min", std::uint64_t{0}),
                               p.value("max", std::uint64_t{INT64_MAX}), def);
  } else if (kind == "real") {
    spec = ParameterSpec::real(name, p.value("min", -1e308), p.value("max", 1e308), def);
  } else if (kind == "string" || kind == "enum") {
    if (p.contains("values")) {
      if (!p["values"].is_array() || p["values"].empty()) {
        bad_manifest(dir, where + ".values: expected a non-empty array of strings");
      }
      std::vector<std::string> choices;
      for (const auto& v : p["values"]) {
        if (!v.is_string()) bad_manifest(dir, where + ".values: expected strings");
        choices.push_back(v.get<std::string>());
      }
      spec = ParameterSpec::enumeration(name, std::move(choices), def);
    } else {
      spec = ParameterSpec::string(name, def);
    }
  } else {
    bad_manifest(dir, where + ".kind: unknown kind '" + kind + "'");
  }
  spec.required = p.value("required", false);
  return spec;
}

}  // namespace

PluginManifest load_manifest(const fs::path& plugin_dir) {
  const fs::path manifest_path = plugin_dir / "manifest.json";
  if (!fs::exists(manifest_path)) bad_manifest(plugin_dir, "no manifest.json");
  Json j = Json::parse(read_file(manifest_path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) bad_manifest(plugin_dir, "manifest.json is not a JSON object");

  PluginManifest m;
  m.directory = fs::absolute(plugin_dir);
  if (!j.contains("name") || !j["name"].is_string() || !valid_identifier(j["name"].get<std::string>())) {
    bad_manifest(plugin_dir, "'name' must be an identifier");
  }
  m.name = j["name"].get<std::string>();

  std::vector<ParameterSpec> specs;
  if (j.contains("parameters")) {
    if (!j["parameters"].is_array()) bad_manifest(plugin_dir, "'parameters' must be an array");
    for (std::size_t i = 0; i < j["parameters"].size(); ++i) {
      specs.push_back(parse_parameter(j["parameters"][i], plugin_dir, i));
    }
  }
  try {
    m.schema = ParameterSchema(std::move(specs));
  } catch (const Error& e) {
    bad_manifest(plugin_dir, e.what());
  }

  if (!j.contains("metrics") || !j["metrics"].is_array() || j["metrics"].empty()) {
    bad_manifest(plugin_dir, "'metrics' must be a non-empty array");
  }
  std::set<std::string> seen;
  for (const auto& metric : j["metrics"]) {
    if (!metric.is_string() || !seen.insert(metric.get<std::string>()).second) {
      bad_manifest(plugin_dir, "'metrics' must hold unique strings");
    }
    m.metrics.push_back(metric.get<std::string>());
  }

  if (!j.contains("entry_points") || !j["entry_points"].is_object()) {
    bad_manifest(plugin_dir, "'entry_points' must be an object");
  }
  const Json& eps = j["entry_points"];
  for (Phase phase : {Phase::kPrepare, Phase::kRun, Phase::kReport, Phase::kClean}) {
    const std::string key(to_string(phase));
    if (!eps.contains(key)) {
      if (phase == Phase::kReport) continue;
      bad_manifest(plugin_dir, "entry point '" + key + "' not declared");
    }
    if (!eps[key].is_string()) bad_manifest(plugin_dir, "entry point '" + key + "' must be a file name");
    const fs::path file = m.directory / eps[key].get<std::string>();
    if (!fs::is_regular_file(file)) {
      bad_manifest(plugin_dir, "entry point '" + key + "' file missing: " + file.filename().string());
    }
    if (::access(file.c_str(), X_OK) != 0) {
      bad_manifest(plugin_dir, "entry point '" + key + "' not executable: " + file.filename().string());
    }
    m.entry_points.emplace(phase, file);
  }
  return m;
}

std::vector<PluginManifest> discover_plugins(const fs::path& plugin_root,
                                             std::vector<std::string>& warnings) {
  if (!fs::is_directory(plugin_root)) {
    raise(ErrorCode::kInvalidParameter, "plugin root " + plugin_root.string() + " is not a directory");
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(plugin_root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());

  std::vector<PluginManifest> out;
  for (const auto& dir : dirs) {
    if (!fs::exists(dir / "manifest.json")) continue;
    try {
      out.push_back(load_manifest(dir));
    } catch (const Error& e) {
      warnings.push_back(std::string("skipping plugin: ") + e.what());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PluginManifest& a, const PluginManifest& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].name == out[i - 1].name) {
      raise(ErrorCode::kDuplicateTask, "plugins " + out[i - 1].directory.string() + " and " +
                                           out[i].directory.string() + " both declare '" +
                                           out[i].name + "'");
    }
  }
  return out;
}

PhaseOutcome invoke_plugin_phase(const PluginManifest& manifest, Phase phase, const TestCase* test,
                                 const fs::path& io_dir, std::chrono::milliseconds timeout,
                                 const Json& extra) {
  auto ep = manifest.entry_points.find(phase);
  if (ep == manifest.entry_points.end()) {
    raise(ErrorCode::kInvalidParameter,
          "plugin '" + manifest.name + "' has no " + std::string(to_string(phase)) + " entry point");
  }
  if (phase == Phase::kRun && test == nullptr) {
    raise(ErrorCode::kInvalidParameter, "run phase requires a test case");
  }
  fs::create_directories(io_dir);

  const std::string phase_name(to_string(phase));
  const std::string suffix = test ? "-" + std::to_string(test->test_id) : "";
  PhaseOutcome outcome;
  outcome.control_path = fs::absolute(io_dir / ("control-" + phase_name + suffix + ".json"));
  outcome.output_path = fs::absolute(
      io_dir / (phase == Phase::kRun ? "plugin_samples.jsonl"
                                     : (phase == Phase::kReport ? "plugin_report.jsonl" : "")));
  if (phase == Phase::kPrepare || phase == Phase::kClean) outcome.output_path = fs::absolute(io_dir);

  Json control = extra.is_object() ? extra : Json::object();
  control["phase"] = phase_name;
  control["params"] = test ? test->params_json() : Json::object();
  control["metrics"] = test ? Json(test->metrics) : control.value("metrics", Json::array());
  control["output_path"] = outcome.output_path.string();
  if (test) control["test_id"] = test->test_id;
  write_file_atomic(outcome.control_path, control.dump() + "\n");
  if (phase == Phase::kRun || phase == Phase::kReport) fs::remove(outcome.output_path);

  const std::int64_t start = now_ns();
  ProcessResult pr = run_process(ep->second, {outcome.control_path.string()}, io_dir, timeout,
                                 io_dir / (phase_name + suffix + ".stdout.log"));
  outcome.elapsed_ns = now_ns() - start;
  outcome.exit_code = pr.exit_code;
  if (pr.timed_out) {
    raise(ErrorCode::kTimeout, "plugin '" + manifest.name + "' " + phase_name + " exceeded " +
                                   std::to_string(timeout.count()) + " ms");
  }
  if (pr.exit_code != 0) {
    std::string detail = "plugin '" + manifest.name + "' " + phase_name + " exited with code " +
                         std::to_string(pr.exit_code);
    if (pr.signal != 0) detail += " (signal " + std::to_string(pr.signal) + ")";
    if (!pr.stderr_tail.empty()) detail += "; stderr: " + pr.stderr_tail;
    raise(ErrorCode::kNonZeroExit, detail);
  }

  if (phase == Phase::kRun) {
    if (!fs::exists(outcome.output_path)) {
      raise(ErrorCode::kMissingSamples, "plugin '" + manifest.name + "' wrote no " +
                                            outcome.output_path.filename().string());
    }
    outcome.samples = read_samples(outcome.output_path, test->test_id);
  }
  return outcome;
}

namespace {

class PluginTask final : public Task {
 public:
  explicit PluginTask(PluginManifest manifest) : manifest_(std::move(manifest)) {}

  void prepare(TaskContext& ctx, std::span<const TestCase> tests) override {
    Json list = Json::array();
    for (const auto& t : tests) list.push_back({{"test_id", t.test_id}, {"params", t.params_json()}});
    invoke_plugin_phase(manifest_, Phase::kPrepare, nullptr, ctx.task_dir(),
                        ctx.options().plugin_timeout, Json{{"tests", std::move(list)}});
  }

  void run(TaskContext& ctx, const TestCase& test, SampleRecorder& out) override {
    auto outcome = invoke_plugin_phase(manifest_, Phase::kRun, &test, ctx.test_dir(test.test_id),
                                       ctx.options().plugin_timeout);
    for (const auto& s : outcome.samples) {
      out.record_at(s.metric, s.value, s.unit, out.origin_ns() + s.wall_time_ns);
    }
    out.meta()["plugin_elapsed_ns"] = outcome.elapsed_ns;
  }

  std::vector<ReportRow> report(TaskContext& ctx, std::span<const TestCase> tests,
                                std::span<const MetricSpec> metrics) override {
    std::vector<ReportRow> rows = Task::report(ctx, tests, metrics);
    if (manifest_.entry_points.count(Phase::kReport) == 0) return rows;

    Json list = Json::array();
    for (const auto& t : tests) {
      list.push_back({{"test_id", t.test_id},
                      {"params", t.params_json()},
                      {"samples_path", fs::absolute(ctx.test_dir(t.test_id) / "samples.jsonl").string()}});
    }
    Json metric_names = manifest_.metrics;
    auto outcome = invoke_plugin_phase(manifest_, Phase::kReport, nullptr, ctx.task_dir(),
                                       ctx.options().plugin_timeout,
                                       Json{{"tests", std::move(list)}, {"metrics", metric_names}});
    if (!fs::exists(outcome.output_path)) return rows;

    // Plugin-supplied rows override the generic aggregation field by field.
    std::ifstream in(outcome.output_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json j = Json::parse(line, nullptr, false);
      if (!j.is_object() || !j.contains("test_id") || !j.contains("metric")) {
        raise(ErrorCode::kMalformedSample, "plugin report line " + std::to_string(line_no));
      }
      for (auto& row : rows) {
        if (row.failed || row.test_id != j["test_id"].get<std::uint64_t>() ||
            row.metric != j["metric"].get<std::string>()) {
          continue;
        }
        auto num = [&](const char* key, std::optional<double>& field) {
          if (j.contains(key) && j[key].is_number()) field = j[key].get<double>();
        };
        if (j.contains("count") && j["count"].is_number_unsigned()) {
          row.stats.count = j["count"].get<std::uint64_t>();
        }
        num("mean", row.stats.mean);
        num("min", row.stats.min);
        num("max", row.stats.max);
        num("p50", row.stats.p50);
        num("p99", row.stats.p99);
        num("throughput", row.stats.throughput);
        if (j.contains("unit") && j["unit"].is_string()) row.unit = j["unit"].get<std::string>();
        row.meta["plugin_report"] = true;
      }
    }
    return rows;
  }

  void clean(TaskContext& ctx) override {
    invoke_plugin_phase(manifest_, Phase::kClean, nullptr, ctx.task_dir(),
                        ctx.options().plugin_timeout);
  }

 private:
  PluginManifest manifest_;
};

}  // namespace

TaskDescriptor make_descriptor(const PluginManifest& manifest) {
  TaskDescriptor d;
  d.name = manifest.name;
  d.summary = "plugin at " + manifest.directory.string();
  d.schema = manifest.schema;
  for (const auto& m : manifest.metrics) {
    d.metrics.push_back(MetricSpec{m, MetricClass::kDistribution, m, "", 1.0, "plugin metric"});
  }
  d.kind = TaskKind::kPlugin;
  d.plugin_dir = manifest.directory;
  d.factory = [manifest] { return std::make_unique<PluginTask>(manifest); };
  return d;
}

}  // namespace bento::plugin
