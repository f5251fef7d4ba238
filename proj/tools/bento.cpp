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

// Command-line front end. Uses only the C API.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "bento/bento.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTestsFailed = 2;

struct Globals {
  std::string plugins;
  std::string format = "table";
  bool verbose = false;
};

int report_error(bento_status st) {
  std::fprintf(stderr, "bento: %s\n", bento_last_error());
  (void)st;
  return kExitError;
}

// Owning wrappers for the C handles.
struct Registry {
  bento_registry* h = nullptr;
  ~Registry() { bento_registry_close(h); }
};
struct Report {
  bento_report* h = nullptr;
  ~Report() { bento_report_free(h); }
};
struct Text {
  char* p = nullptr;
  ~Text() { bento_free(p); }
};

bento_status open_registry(const Globals& g, Registry& reg) {
  const bento_status st = bento_registry_open(g.plugins.c_str(), &reg.h);
  if (st == BENTO_OK && g.verbose) {
    for (size_t i = 0; i < bento_registry_warning_count(reg.h); ++i) {
      std::fprintf(stderr, "bento: warning: %s\n", bento_registry_warning(reg.h, i));
    }
  }
  return st;
}

std::string default_workspace() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return std::string("bento-runs/") + buf;
}

int print_report(const bento_report* report, const std::string& format) {
  bento_format f;
  if (bento_parse_format(format.c_str(), &f) != BENTO_OK) return report_error(BENTO_E_USAGE);
  Text text;
  if (bento_status st = bento_report_render(report, f, &text.p); st != BENTO_OK) return report_error(st);
  std::fputs(text.p, stdout);
  return kExitOk;
}

int cmd_run(const Globals& g, const std::string& box, std::string workspace, bool force) {
  bento_format f;
  if (bento_parse_format(g.format.c_str(), &f) != BENTO_OK) return report_error(BENTO_E_USAGE);
  Registry reg;
  if (bento_status st = open_registry(g, reg); st != BENTO_OK) return report_error(st);
  if (workspace.empty()) workspace = default_workspace();
  bento_run_options opts{};
  opts.force = force ? 1 : 0;
  opts.verbose = g.verbose ? 1 : 0;
  Report report;
  if (bento_status st = bento_run_box_file(reg.h, box.c_str(), workspace.c_str(), &opts, &report.h);
      st != BENTO_OK) {
    return report_error(st);
  }
  if (int rc = print_report(report.h, g.format); rc != kExitOk) return rc;
  const size_t failed = bento_report_failed_tests(report.h);
  std::fprintf(stderr, "bento: report written to %s/report.json", workspace.c_str());
  if (failed != 0) std::fprintf(stderr, " (%zu failed tests)", failed);
  std::fputc('\n', stderr);
  return failed == 0 ? kExitOk : kExitTestsFailed;
}

int cmd_clean(const Globals& g, const std::vector<std::string>& names, bool all,
              const std::string& workspace) {
  if (all == !names.empty()) {
    std::fprintf(stderr, "bento: clean takes task names or --all\n");
    return kExitError;
  }
  Registry reg;
  if (bento_status st = open_registry(g, reg); st != BENTO_OK) return report_error(st);
  std::vector<const char*> ptrs;
  for (const auto& n : names) ptrs.push_back(n.c_str());
  const bento_status st = bento_clean(reg.h, workspace.c_str(), ptrs.data(), ptrs.size());
  return st == BENTO_OK ? kExitOk : report_error(st);
}

int cmd_list(const Globals& g) {
  Registry reg;
  if (bento_status st = open_registry(g, reg); st != BENTO_OK) return report_error(st);
  Text json;
  if (bento_status st = bento_list_tasks(reg.h, &json.p); st != BENTO_OK) return report_error(st);
  if (g.format == "json") {
    std::printf("%s\n", json.p);
    return kExitOk;
  }
  for (const auto& t : nlohmann::json::parse(json.p)) {
    std::printf("%-16s %-8s %s\n", t["name"].get<std::string>().c_str(),
                t["kind"].get<std::string>().c_str(), t["summary"].get<std::string>().c_str());
  }
  return kExitOk;
}

int cmd_report(const Globals& g, const std::string& run_dir) {
  Report report;
  if (bento_status st = bento_report_load(run_dir.c_str(), &report.h); st != BENTO_OK) {
    return report_error(st);
  }
  return print_report(report.h, g.format);
}

int cmd_serve(bento_server_kind kind, const std::string& host, std::uint16_t port,
              const std::string& dir) {
  // Block the stop signals before any server thread exists so only sigwait
  // below receives them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  bento_server* server = nullptr;
  if (bento_status st = bento_server_start(kind, host.c_str(), port, dir.c_str(), &server);
      st != BENTO_OK) {
    return report_error(st);
  }
  std::printf("listening on %s:%u\n", host.c_str(), static_cast<unsigned>(bento_server_port(server)));
  std::fflush(stdout);
  int sig = 0;
  sigwait(&set, &sig);
  bento_server_stop(server);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bento: benchmark harness for data-processing platforms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", bento_version());

  Globals g;
  if (const char* env = std::getenv("BENTO_PLUGIN_PATH")) g.plugins = env;
  app.add_option("--plugins", g.plugins, "plugin root directory (env BENTO_PLUGIN_PATH)");
  app.add_option("--format", g.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_flag("--verbose,-v", g.verbose, "task progress on stderr");

  std::string box;
  std::string workspace;
  bool force = false;
  auto* run = app.add_subcommand("run", "execute a measurement box");
  run->add_option("box", box, "box JSON file")->required();
  run->add_option("--workspace,-w", workspace, "run directory (default ./bento-runs/<timestamp>)");
  run->add_flag("--force", force, "overwrite an existing report.json");

  std::vector<std::string> names;
  bool all = false;
  std::string clean_ws;
  auto* clean = app.add_subcommand("clean", "run clean phases and remove task state");
  clean->add_option("tasks", names, "task names");
  clean->add_flag("--all", all, "every registered task");
  clean->add_option("--workspace,-w", clean_ws, "run directory")->required();

  auto* list = app.add_subcommand("list", "list registered tasks");

  std::string run_dir;
  auto* report = app.add_subcommand("report", "re-render a run's report.json");
  report->add_option("run_dir", run_dir, "run directory")->required();

  std::string host = "0.0.0.0";
  std::uint16_t port = 0;
  std::string dir = ".";
  auto add_serve = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--host", host, "listen address")->capture_default_str();
    s->add_option("--port", port, "listen port, 0 for ephemeral")->capture_default_str();
    return s;
  };
  auto* serve_net = add_serve("serve-net", "run a net_tcp echo sink");
  auto* serve_storage = add_serve("serve-storage-node", "run a pred_pushdown storage node");
  serve_storage->add_option("--dir", dir, "table directory")->capture_default_str();
  auto* serve_index = add_serve("serve-index-partition", "run an index_offload partition server");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  if (run->parsed()) return cmd_run(g, box, workspace, force);
  if (clean->parsed()) return cmd_clean(g, names, all, clean_ws);
  if (list->parsed()) return cmd_list(g);
  if (report->parsed()) return cmd_report(g, run_dir);
  if (serve_net->parsed()) return cmd_serve(BENTO_SERVER_NET_SINK, host, port, dir);
  if (serve_storage->parsed()) return cmd_serve(BENTO_SERVER_STORAGE_NODE, host, port, dir);
  if (serve_index->parsed()) return cmd_serve(BENTO_SERVER_INDEX_PARTITION, host, port, dir);
  return kExitError;
}
