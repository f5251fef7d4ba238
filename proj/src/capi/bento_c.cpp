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

#include "bento/bento.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "bento/error.hpp"
#include "bento/executor.hpp"
#include "bento/index.hpp"
#include "bento/network.hpp"
#include "bento/pushdown.hpp"
#include "bento/registry.hpp"
#include "bento/util.hpp"

namespace fs = std::filesystem;

struct bento_registry {
  bento::Registry registry;
};

struct bento_report {
  bento::RunReport report;
};

struct bento_server {
  std::unique_ptr<bento::net::TcpServer> server;
};

namespace {

thread_local std::string g_last_error;

bento_status fail(bento_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into a status and last-error message.
template <typename Fn>
bento_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return BENTO_OK;
  } catch (const bento::Error& e) {
    return fail(static_cast<bento_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(BENTO_E_SYNTAX, std::string("SyntaxError: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(BENTO_E_ALLOCATION_FAILED, "AllocationFailed: out of memory");
  } catch (const std::exception& e) {
    return fail(BENTO_E_INTERNAL, std::string("Internal: ") + e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

bento::RunOptions to_options(const bento_run_options* in) {
  bento::RunOptions o;
  if (in == nullptr) return o;
  o.verbose = in->verbose != 0;
  if (in->plugin_timeout_ms > 0) o.plugin_timeout = std::chrono::milliseconds(in->plugin_timeout_ms);
  if (in->reservoir_cap > 0) o.reservoir_cap = static_cast<std::size_t>(in->reservoir_cap);
  return o;
}

bento_status run_text(const bento_registry* registry, const std::string& text, const char* workspace,
                      const bento_run_options* options, bento_report** out) {
  if (registry == nullptr || workspace == nullptr || out == nullptr) {
    return fail(BENTO_E_USAGE, "UsageError: null argument");
  }
  *out = nullptr;
  return guarded([&] {
    const bento::MeasurementBox box = bento::parse_box(text, registry->registry);
    const fs::path ws(workspace);
    const bool force = options != nullptr && options->force != 0;
    if (!force && fs::exists(ws / bento::kReportFileName)) {
      bento::raise(bento::ErrorCode::kWorkspace,
                   (ws / bento::kReportFileName).string() + " exists; pass force to overwrite");
    }
    auto report = std::make_unique<bento_report>();
    report->report = bento::execute_box(box, registry->registry, ws, to_options(options));
    *out = report.release();
  });
}

}  // namespace

extern "C" {

const char* bento_version(void) { return bento::kHarnessVersion; }

const char* bento_last_error(void) { return g_last_error.c_str(); }

const char* bento_status_name(bento_status status) {
  if (status == BENTO_E_USAGE) return "UsageError";
  static thread_local std::string name;
  name = std::string(bento::to_string(static_cast<bento::ErrorCode>(static_cast<int>(status))));
  return name.c_str();
}

void bento_free(void* p) { std::free(p); }

bento_status bento_registry_open(const char* plugin_root, bento_registry** out) {
  if (out == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<bento_registry>();
    r->registry = bento::Registry::with_builtins();
    if (plugin_root != nullptr && *plugin_root != '\0') {
      if (!fs::is_directory(plugin_root)) {
        bento::raise(bento::ErrorCode::kInvalidManifest,
                     std::string("plugin root ") + plugin_root + " is not a directory");
      }
      r->registry.discover_plugins(plugin_root);
    }
    *out = r.release();
  });
}

void bento_registry_close(bento_registry* registry) { delete registry; }

size_t bento_registry_warning_count(const bento_registry* registry) {
  return registry == nullptr ? 0 : registry->registry.warnings().size();
}

const char* bento_registry_warning(const bento_registry* registry, size_t index) {
  if (registry == nullptr || index >= registry->registry.warnings().size()) return nullptr;
  return registry->registry.warnings()[index].c_str();
}

bento_status bento_list_tasks(const bento_registry* registry, char** out_json) {
  if (registry == nullptr || out_json == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  return guarded([&] {
    bento::Json list = bento::Json::array();
    for (const auto* d : bento::list_tasks(registry->registry)) list.push_back(d->to_json());
    *out_json = dup_string(list.dump(2));
  });
}

bento_status bento_run_box_file(const bento_registry* registry, const char* box_path,
                                const char* workspace, const bento_run_options* options,
                                bento_report** out) {
  if (box_path == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  std::string text;
  const bento_status st = guarded([&] { text = bento::read_file(box_path); });
  if (st != BENTO_OK) return st;
  return run_text(registry, text, workspace, options, out);
}

bento_status bento_run_box_text(const bento_registry* registry, const char* box_json,
                                const char* workspace, const bento_run_options* options,
                                bento_report** out) {
  if (box_json == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  return run_text(registry, box_json, workspace, options, out);
}

bento_status bento_validate_box_text(const bento_registry* registry, const char* box_json,
                                     size_t* out_tests) {
  if (registry == nullptr || box_json == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  return guarded([&] {
    const auto box = bento::parse_box(box_json, registry->registry);
    const auto tests = bento::expand_box(box, registry->registry);
    if (out_tests != nullptr) *out_tests = tests.size();
  });
}

bento_status bento_report_load(const char* run_dir, bento_report** out) {
  if (run_dir == nullptr || out == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  *out = nullptr;
  return guarded([&] {
    const fs::path path = fs::path(run_dir) / bento::kReportFileName;
    if (!fs::is_regular_file(path)) {
      bento::raise(bento::ErrorCode::kWorkspace, path.string() + " not found");
    }
    auto r = std::make_unique<bento_report>();
    r->report = bento::report_from_json(bento::Json::parse(bento::read_file(path)));
    *out = r.release();
  });
}

bento_status bento_report_render(const bento_report* report, bento_format format, char** out_text) {
  if (report == nullptr || out_text == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  return guarded([&] {
    bento::ReportFormat f = bento::ReportFormat::kTable;
    if (format == BENTO_FORMAT_CSV) f = bento::ReportFormat::kCsv;
    if (format == BENTO_FORMAT_JSON) f = bento::ReportFormat::kJson;
    *out_text = dup_string(bento::render_report(report->report, f));
  });
}

size_t bento_report_row_count(const bento_report* report) {
  return report == nullptr ? 0 : report->report.rows.size();
}

size_t bento_report_failed_tests(const bento_report* report) {
  return report == nullptr ? 0 : bento::failed_test_count(report->report);
}

void bento_report_free(bento_report* report) { delete report; }

bento_status bento_parse_format(const char* name, bento_format* out) {
  if (name == nullptr || out == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  const auto f = bento::parse_report_format(name);
  if (!f) return fail(BENTO_E_USAGE, std::string("UsageError: unknown format '") + name + "'");
  *out = *f == bento::ReportFormat::kCsv    ? BENTO_FORMAT_CSV
         : *f == bento::ReportFormat::kJson ? BENTO_FORMAT_JSON
                                            : BENTO_FORMAT_TABLE;
  return BENTO_OK;
}

bento_status bento_clean(const bento_registry* registry, const char* workspace,
                         const char* const* task_names, size_t count) {
  if (registry == nullptr || workspace == nullptr || (count != 0 && task_names == nullptr)) {
    return fail(BENTO_E_USAGE, "UsageError: null argument");
  }
  return guarded([&] {
    std::vector<std::string> names;
    if (count == 0) {
      for (const auto* d : registry->registry.list()) names.push_back(d->name);
    } else {
      names.assign(task_names, task_names + count);
    }
    bento::clean(registry->registry, names, workspace);
  });
}

bento_status bento_server_start(bento_server_kind kind, const char* host, uint16_t port,
                                const char* data_dir, bento_server** out) {
  if (host == nullptr || out == nullptr) return fail(BENTO_E_USAGE, "UsageError: null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<bento_server>();
    switch (kind) {
      case BENTO_SERVER_NET_SINK:
        s->server = bento::network::start_sink(host, port);
        break;
      case BENTO_SERVER_STORAGE_NODE:
        s->server = bento::pushdown::start_storage_node(
            host, port, data_dir != nullptr && *data_dir != '\0' ? fs::path(data_dir) : fs::path("."));
        break;
      case BENTO_SERVER_INDEX_PARTITION:
        s->server = bento::index::start_partition_server(host, port);
        break;
      default:
        bento::raise(bento::ErrorCode::kInvalidParameter, "unknown server kind");
    }
    *out = s.release();
  });
}

uint16_t bento_server_port(const bento_server* server) {
  return server == nullptr || !server->server ? 0 : server->server->port();
}

void bento_server_stop(bento_server* server) {
  if (server == nullptr) return;
  if (server->server) server->server->stop();
  delete server;
}

}  // extern "C"
