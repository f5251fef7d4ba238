/* Copyright 2026 The Bento Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the bento benchmark harness.
 *
 * Every fallible call returns a bento_status; on failure the message is
 * available from bento_last_error() on the same thread until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with bento_free().
 */

#ifndef BENTO_BENTO_H_
#define BENTO_BENTO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BENTO_API __declspec(dllexport)
#elif defined(__GNUC__)
#define BENTO_API __attribute__((visibility("default")))
#else
#define BENTO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bento_status {
  BENTO_OK = 0,
  BENTO_E_SYNTAX = 1,
  BENTO_E_UNKNOWN_TASK = 2,
  BENTO_E_UNKNOWN_PARAMETER = 3,
  BENTO_E_UNKNOWN_METRIC = 4,
  BENTO_E_INVALID_VALUE = 5,
  BENTO_E_EMPTY_BOX = 6,
  BENTO_E_DUPLICATE_TASK = 7,
  BENTO_E_INVALID_MANIFEST = 8,
  BENTO_E_INVALID_COMBINATION = 9,
  BENTO_E_EMPTY_WORKLOAD = 10,
  BENTO_E_EMPTY_SAMPLES = 11,
  BENTO_E_ZERO_ELAPSED = 12,
  BENTO_E_PREPARE_FAILED = 13,
  BENTO_E_RUN_FAILED = 14,
  BENTO_E_REPORT_FAILED = 15,
  BENTO_E_CLEAN_FAILED = 16,
  BENTO_E_NON_ZERO_EXIT = 17,
  BENTO_E_MALFORMED_SAMPLE = 18,
  BENTO_E_TIMEOUT = 19,
  BENTO_E_ALLOCATION_FAILED = 20,
  BENTO_E_SIZE_NOT_WORD_ALIGNED = 21,
  BENTO_E_ACCESS_SIZE_EXCEEDS_FILE = 22,
  BENTO_E_INSUFFICIENT_SPACE = 23,
  BENTO_E_PERMISSION_DENIED = 24,
  BENTO_E_INVALID_PARAMETER = 25,
  BENTO_E_BIND_FAILED = 26,
  BENTO_E_CONNECT_FAILED = 27,
  BENTO_E_PEER_CLOSED = 28,
  BENTO_E_PEER_UNREACHABLE = 29,
  BENTO_E_TABLE_MISSING = 30,
  BENTO_E_SERVER_UNREACHABLE = 31,
  BENTO_E_ROUTING_ERROR = 32,
  BENTO_E_MISSING_SAMPLES = 33,
  BENTO_E_WORKSPACE = 34,
  BENTO_E_IO = 35,
  BENTO_E_CHECKSUM_MISMATCH = 36,
  BENTO_E_PROTOCOL = 37,
  BENTO_E_USAGE = 38,
  BENTO_E_INTERNAL = 99
} bento_status;

typedef enum bento_format {
  BENTO_FORMAT_TABLE = 0,
  BENTO_FORMAT_CSV = 1,
  BENTO_FORMAT_JSON = 2
} bento_format;

typedef enum bento_server_kind {
  BENTO_SERVER_NET_SINK = 0,        /* net_tcp echo sink */
  BENTO_SERVER_STORAGE_NODE = 1,    /* pred_pushdown storage node */
  BENTO_SERVER_INDEX_PARTITION = 2  /* index_offload partition */
} bento_server_kind;

typedef struct bento_registry bento_registry;
typedef struct bento_report bento_report;
typedef struct bento_server bento_server;

typedef struct bento_run_options {
  int force;                  /* overwrite an existing report.json */
  int verbose;                /* task progress on stderr */
  int64_t plugin_timeout_ms;  /* 0 = one hour */
  uint64_t reservoir_cap;     /* 0 = ten million samples per series */
} bento_run_options;

BENTO_API const char* bento_version(void);
BENTO_API const char* bento_last_error(void);
/* "SyntaxError", "UnknownTask", ... */
BENTO_API const char* bento_status_name(bento_status status);
BENTO_API void bento_free(void* p);

/* Built-in tasks plus the plugins under plugin_root (NULL or "" for none).
 * Invalid plugin directories are skipped and listed as warnings. */
BENTO_API bento_status bento_registry_open(const char* plugin_root, bento_registry** out);
BENTO_API void bento_registry_close(bento_registry* registry);
BENTO_API size_t bento_registry_warning_count(const bento_registry* registry);
BENTO_API const char* bento_registry_warning(const bento_registry* registry, size_t index);
/* JSON array of task descriptors sorted by name. */
BENTO_API bento_status bento_list_tasks(const bento_registry* registry, char** out_json);

/* Parses, expands and executes a box, writing <workspace>/report.json.
 * Fails with BENTO_E_WORKSPACE when report.json exists and force is 0.
 * A report whose tests failed is still returned with BENTO_OK. */
BENTO_API bento_status bento_run_box_file(const bento_registry* registry, const char* box_path,
                                          const char* workspace, const bento_run_options* options,
                                          bento_report** out);
BENTO_API bento_status bento_run_box_text(const bento_registry* registry, const char* box_json,
                                          const char* workspace, const bento_run_options* options,
                                          bento_report** out);
/* Parses and expands without running; *out_tests receives the test count. */
BENTO_API bento_status bento_validate_box_text(const bento_registry* registry, const char* box_json,
                                               size_t* out_tests);

/* Loads <run_dir>/report.json. */
BENTO_API bento_status bento_report_load(const char* run_dir, bento_report** out);
BENTO_API bento_status bento_report_render(const bento_report* report, bento_format format,
                                           char** out_text);
BENTO_API size_t bento_report_row_count(const bento_report* report);
/* Distinct tests with at least one failed row. */
BENTO_API size_t bento_report_failed_tests(const bento_report* report);
BENTO_API void bento_report_free(bento_report* report);
BENTO_API bento_status bento_parse_format(const char* name, bento_format* out);

/* Runs each task's clean phase and removes its workspace directory.
 * count == 0 cleans every registered task. */
BENTO_API bento_status bento_clean(const bento_registry* registry, const char* workspace,
                                   const char* const* task_names, size_t count);

/* Starts a server on host:port (port 0 = ephemeral). data_dir is where a
 * storage node keeps its tables and is ignored by the other kinds. */
BENTO_API bento_status bento_server_start(bento_server_kind kind, const char* host, uint16_t port,
                                          const char* data_dir, bento_server** out);
BENTO_API uint16_t bento_server_port(const bento_server* server);
/* Stops the server and releases it. */
BENTO_API void bento_server_stop(bento_server* server);

#ifdef __cplusplus
}
#endif

#endif /* BENTO_BENTO_H_ */
