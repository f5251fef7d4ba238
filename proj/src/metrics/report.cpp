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

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "bento/error.hpp"
#include "bento/metrics.hpp"
#include "bento/util.hpp"

namespace fs = std::filesystem;

namespace bento {

namespace {

const MetricSpec* find_spec(std::span<const MetricSpec> specs, std::string_view name) {
  for (const auto& s : specs) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ReportRow base_row(const std::string& task, std::uint64_t test_id, const Json& params,
                   const std::string& metric, const Json& meta) {
  ReportRow row;
  row.task = task;
  row.test_id = test_id;
  row.params = params;
  row.metric = metric;
  row.meta = meta;
  return row;
}

}  // namespace

std::vector<ReportRow> aggregate_test(const fs::path& test_dir, const std::string& task,
                                      std::uint64_t test_id, const Json& params,
                                      std::span<const std::string> requested,
                                      std::span<const MetricSpec> specs) {
  Json meta = Json::object();
  if (fs::exists(test_dir / "meta.json")) {
    meta = Json::parse(read_file(test_dir / "meta.json"), nullptr, false);
    if (meta.is_discarded()) meta = Json::object();
  }

  std::string failure;
  if (fs::exists(test_dir / "status.json")) {
    Json status = Json::parse(read_file(test_dir / "status.json"), nullptr, false);
    if (status.is_object() && !status.value("ok", false)) {
      failure = status.value("error", std::string("test failed"));
    }
  }

  std::vector<MetricSample> samples;
  if (failure.empty()) {
    if (!fs::exists(test_dir / "samples.jsonl")) {
      failure = std::string(to_string(ErrorCode::kMissingSamples)) + ": test " +
                std::to_string(test_id);
    } else {
      try {
        samples = read_samples(test_dir / "samples.jsonl", test_id);
      } catch (const Error& e) {
        failure = e.what();
      }
    }
  }

  std::vector<ReportRow> rows;
  rows.reserve(requested.size());
  for (const auto& name : requested) {
    ReportRow row = base_row(task, test_id, params, name, meta);
    if (!failure.empty()) {
      row.failed = true;
      row.error = failure;
      rows.push_back(std::move(row));
      continue;
    }
    MetricSpec fallback{name, MetricClass::kDistribution, name, "", 1.0, ""};
    const MetricSpec* spec = find_spec(specs, name);
    if (spec == nullptr) spec = &fallback;

    if (spec->metric_class == MetricClass::kDistribution) {
      std::vector<double> values;
      std::string sample_unit;
      for (const auto& s : samples) {
        if (s.metric != spec->source) continue;
        values.push_back(s.value * spec->scale);
        if (sample_unit.empty()) sample_unit = s.unit;
      }
      row.stats = summarize(std::move(values));
      row.unit = spec->unit.empty() ? sample_unit : spec->unit;
    } else {
      long double total = 0.0L;
      std::uint64_t count = 0;
      std::int64_t elapsed = 0;
      for (const auto& s : samples) {
        if (s.metric == spec->source) {
          total += s.value;
          ++count;
        } else if (s.metric == kElapsedMetric) {
          elapsed = std::max(elapsed, static_cast<std::int64_t>(s.value));
        }
      }
      row.stats.count = count;
      row.total = static_cast<double>(total);
      row.unit = spec->unit;
      if (elapsed > 0) {
        // One rounding at the end keeps the scaled rate within an ulp.
        row.stats.throughput = static_cast<double>(
            total * 1e9L * static_cast<long double>(spec->scale) / static_cast<long double>(elapsed));
      } else if (total == 0.0L) {
        row.stats.throughput = 0.0;
      } else {
        row.failed = true;
        row.error = std::string(to_string(ErrorCode::kZeroElapsed)) + ": test " +
                    std::to_string(test_id) + " logged no elapsed time";
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t failed_test_count(const RunReport& report) {
  std::set<std::pair<std::string, std::uint64_t>> failed;
  for (const auto& r : report.rows) {
    if (r.failed) failed.emplace(r.task, r.test_id);
  }
  return failed.size();
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  return std::nullopt;
}

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

Json row_to_json(const ReportRow& r) {
  return Json{{"task", r.task},
              {"test_id", r.test_id},
              {"params", r.params},
              {"metric", r.metric},
              {"count", r.stats.count},
              {"mean", opt(r.stats.mean)},
              {"min", opt(r.stats.min)},
              {"max", opt(r.stats.max)},
              {"p50", opt(r.stats.p50)},
              {"p99", opt(r.stats.p99)},
              {"throughput", opt(r.stats.throughput)},
              {"total", opt(r.total)},
              {"unit", r.unit},
              {"failed", r.failed},
              {"error", r.error},
              {"meta", r.meta}};
}

ReportRow row_from_json(const Json& j) {
  ReportRow r;
  r.task = j.at("task").get<std::string>();
  r.test_id = j.at("test_id").get<std::uint64_t>();
  r.params = j.value("params", Json::object());
  r.metric = j.at("metric").get<std::string>();
  r.stats.count = j.value("count", std::uint64_t{0});
  r.stats.mean = opt_from(j, "mean");
  r.stats.min = opt_from(j, "min");
  r.stats.max = opt_from(j, "max");
  r.stats.p50 = opt_from(j, "p50");
  r.stats.p99 = opt_from(j, "p99");
  r.stats.throughput = opt_from(j, "throughput");
  r.total = opt_from(j, "total");
  r.unit = j.value("unit", std::string());
  r.failed = j.value("failed", false);
  r.error = j.value("error", std::string());
  r.meta = j.value("meta", Json::object());
  return r;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string number_text(const std::optional<double>& v) {
  return v ? Json(*v).dump() : std::string();
}

std::string human_number(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", *v);
  return buf;
}

std::vector<std::string> param_columns(const RunReport& report) {
  std::set<std::string> names;
  for (const auto& r : report.rows) {
    for (auto it = r.params.begin(); it != r.params.end(); ++it) names.insert(it.key());
  }
  return {names.begin(), names.end()};
}

std::string render_csv(const RunReport& report) {
  const auto params = param_columns(report);
  std::ostringstream out;
  out << "task,test_id";
  for (const auto& p : params) out << ',' << csv_field("param:" + p);
  out << ",metric,count,mean,min,max,p50,p99,throughput,unit\r\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.task) << ',' << r.test_id;
    for (const auto& p : params) {
      out << ',';
      if (auto it = r.params.find(p); it != r.params.end()) out << csv_field(scalar_text(*it));
    }
    out << ',' << csv_field(r.metric) << ',' << r.stats.count << ','
        << number_text(r.stats.mean) << ',' << number_text(r.stats.min) << ','
        << number_text(r.stats.max) << ',' << number_text(r.stats.p50) << ','
        << number_text(r.stats.p99) << ',' << number_text(r.stats.throughput) << ','
        << csv_field(r.unit) << "\r\n";
  }
  return out.str();
}

std::string render_table(const RunReport& report) {
  const std::vector<std::string> header = {"TASK", "TEST", "PARAMS", "METRIC", "COUNT", "MEAN",
                                           "P50",  "P99",  "THROUGHPUT", "UNIT", "STATUS"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : report.rows) {
    std::string params;
    for (auto it = r.params.begin(); it != r.params.end(); ++it) {
      if (!params.empty()) params += ' ';
      params += it.key() + "=" + scalar_text(it.value());
    }
    cells.push_back({r.task, std::to_string(r.test_id), params, r.metric,
                     std::to_string(r.stats.count), human_number(r.stats.mean),
                     human_number(r.stats.p50), human_number(r.stats.p99),
                     human_number(r.stats.throughput), r.unit.empty() ? "-" : r.unit,
                     r.failed ? "FAILED: " + r.error : "ok"});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : cells) {
    // The status column is last and left ragged.
    for (std::size_t c = 0; c + 1 < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto emit = [&](std::ostringstream& out, const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  };
  std::ostringstream out;
  emit(out, header);
  std::size_t total = 0;
  for (std::size_t c = 0; c + 1 < header.size(); ++c) total += width[c] + 2;
  out << std::string(total + header.back().size(), '-') << '\n';
  for (const auto& row : cells) emit(out, row);
  return out.str();
}

}  // namespace

Json to_json(const RunReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  return Json{{"schema", report.schema},
              {"start_time", report.start_time},
              {"host", report.host},
              {"harness_version", report.harness_version},
              {"metadata", report.metadata},
              {"rows", std::move(rows)}};
}

RunReport report_from_json(const Json& j) {
  try {
    RunReport report;
    report.schema = j.at("schema").get<int>();
    if (report.schema != RunReport::kSchemaVersion) {
      raise(ErrorCode::kSyntax, "unsupported report schema " + std::to_string(report.schema));
    }
    report.start_time = j.value("start_time", std::string());
    report.host = j.value("host", std::string());
    report.harness_version = j.value("harness_version", std::string());
    report.metadata = j.value("metadata", Json::object());
    for (const auto& r : j.at("rows")) report.rows.push_back(row_from_json(r));
    return report;
  } catch (const Json::exception& e) {
    raise(ErrorCode::kSyntax, std::string("report.json: ") + e.what());
  }
}

std::string render_report(const RunReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return to_json(report).dump(2) + "\n";
    case ReportFormat::kCsv: return render_csv(report);
    case ReportFormat::kTable: return render_table(report);
  }
  return {};
}

}  // namespace bento
