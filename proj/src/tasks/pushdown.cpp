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

#include "bento/pushdown.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "bento/error.hpp"
#include "bento/rng.hpp"
#include "bento/tasks.hpp"
#include "bento/util.hpp"

namespace fs = std::filesystem;

namespace bento::pushdown {

namespace {

constexpr std::uint64_t kNoFilter = UINT64_MAX;
// mix64 rounds burned per tuple for each unit of slowdown above 1.
constexpr double kSpinRoundsPerUnit = 32.0;

struct Request {
  char op = 0;
  TableSpec spec;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t threshold = kNoFilter;
  double slowdown = 1.0;
};

std::vector<std::byte> encode(const Request& r) {
  std::vector<std::byte> out(1 + 8 * (r.op == 'S' ? 7 : 3));
  out[0] = static_cast<std::byte>(r.op);
  std::byte* p = out.data() + 1;
  for (std::uint64_t v : {r.spec.tuple_count, r.spec.tuple_width, r.spec.seed}) {
    net::put_u64(p, v);
    p += 8;
  }
  if (r.op == 'S') {
    for (std::uint64_t v : {r.lo, r.hi, r.threshold, std::bit_cast<std::uint64_t>(r.slowdown)}) {
      net::put_u64(p, v);
      p += 8;
    }
  }
  return out;
}

Request decode(std::span<const std::byte> in) {
  Request r;
  if (in.empty()) raise(ErrorCode::kProtocol, "empty request");
  r.op = static_cast<char>(in[0]);
  const std::size_t want = 1 + 8 * (r.op == 'S' ? 7 : 3);
  if ((r.op != 'S' && r.op != 'T') || in.size() != want) {
    raise(ErrorCode::kProtocol, "malformed storage-node request");
  }
  const std::byte* p = in.data() + 1;
  r.spec.tuple_count = net::get_u64(p);
  r.spec.tuple_width = net::get_u64(p + 8);
  r.spec.seed = net::get_u64(p + 16);
  if (r.op == 'S') {
    r.lo = net::get_u64(p + 24);
    r.hi = net::get_u64(p + 32);
    r.threshold = net::get_u64(p + 40);
    r.slowdown = std::bit_cast<double>(net::get_u64(p + 48));
  }
  return r;
}

void send_status(int fd, ErrorCode code, const std::string& text) {
  std::vector<std::byte> frame(1 + text.size());
  frame[0] = static_cast<std::byte>(static_cast<int>(code));
  std::memcpy(frame.data() + 1, text.data(), text.size());
  net::write_frame(fd, frame);
}

void expect_ok(int fd) {
  std::vector<std::byte> frame;
  if (!net::read_frame(fd, frame) || frame.empty()) {
    raise(ErrorCode::kPeerClosed, "storage node closed before replying");
  }
  const auto code = static_cast<ErrorCode>(static_cast<int>(frame[0]));
  if (code != ErrorCode::kOk) {
    // The node already formatted the message as "<CodeName>: detail".
    throw Error(code, std::string(reinterpret_cast<const char*>(frame.data() + 1), frame.size() - 1));
  }
}

void validate(const TableSpec& spec) {
  if (spec.tuple_count == 0) raise(ErrorCode::kInvalidParameter, "table has no tuples");
  if (spec.tuple_width < kMinTupleWidth || spec.tuple_width > kMaxTupleWidth) {
    raise(ErrorCode::kInvalidParameter, "tuple width " + std::to_string(spec.tuple_width));
  }
}

std::uint64_t burn(std::uint64_t rounds, std::uint64_t x) noexcept {
  for (std::uint64_t i = 0; i < rounds; ++i) x = mix64(x);
  return x;
}

class Node {
 public:
  explicit Node(fs::path dir) : dir_(std::move(dir)) {}

  void handle(net::Socket& s) {
    std::vector<std::byte> frame;
    while (net::read_frame(s.fd(), frame)) {
      Request r;
      try {
        r = decode(frame);
        validate(r.spec);
      } catch (const Error& e) {
        send_status(s.fd(), e.code(), e.what());
        return;
      }
      if (r.op == 'T') {
        try {
          ensure(r.spec);
          send_status(s.fd(), ErrorCode::kOk, "");
        } catch (const Error& e) {
          send_status(s.fd(), e.code(), e.what());
        }
        continue;
      }
      std::shared_ptr<Table> table;
      try {
        table = open(r.spec);
        if (r.lo > r.hi || r.hi > r.spec.tuple_count) {
          raise(ErrorCode::kInvalidParameter, "scan range out of bounds");
        }
      } catch (const Error& e) {
        send_status(s.fd(), e.code(), e.what());
        continue;
      }
      send_status(s.fd(), ErrorCode::kOk, "");
      scan(s.fd(), *table, r);
    }
  }

 private:
  void ensure(const TableSpec& spec) {
    std::lock_guard lock(mu_);
    const fs::path path = dir_ / spec.file_name();
    std::error_code ec;
    if (fs::file_size(path, ec) == spec.tuple_count * spec.tuple_width && !ec) return;
    tables_.erase(path.string());
    generate_table(spec, path);
  }

  std::shared_ptr<Table> open(const TableSpec& spec) {
    std::lock_guard lock(mu_);
    const fs::path path = dir_ / spec.file_name();
    auto it = tables_.find(path.string());
    if (it != tables_.end()) return it->second;
    auto t = std::make_shared<Table>(path, spec);
    tables_.emplace(path.string(), t);
    return t;
  }

  static void scan(int fd, const Table& table, const Request& r) {
    const std::uint64_t w = table.spec().tuple_width;
    std::byte header[kBatchHeaderBytes];
    if (r.threshold == kNoFilter) {
      for (std::uint64_t i = r.lo; i < r.hi; i += kBatchTuples) {
        const std::uint64_t n = std::min(kBatchTuples, r.hi - i);
        net::put_u64(header, n);
        net::write_all(fd, header, sizeof(header));
        net::write_all(fd, table.tuple(i), n * w);
      }
    } else {
      const auto rounds = static_cast<std::uint64_t>(
          std::llround(std::max(0.0, r.slowdown - 1.0) * kSpinRoundsPerUnit));
      std::vector<std::byte> batch(kBatchTuples * w);
      std::uint64_t count = 0;
      std::uint64_t sink = 0;
      auto flush = [&] {
        net::put_u64(header, count);
        net::write_all(fd, header, sizeof(header));
        net::write_all(fd, batch.data(), count * w);
        count = 0;
      };
      for (std::uint64_t i = r.lo; i < r.hi; ++i) {
        const std::uint64_t key = table.key(i);
        if (rounds != 0) sink ^= burn(rounds, key);
        if (key < r.threshold) {
          std::memcpy(batch.data() + count * w, table.tuple(i), w);
          if (++count == kBatchTuples) flush();
        }
      }
      if (count != 0) flush();
      if (sink == 0x5EEDULL) std::this_thread::yield();  // keeps the burn observable
    }
    net::put_u64(header, 0);
    net::write_all(fd, header, sizeof(header));
  }

  fs::path dir_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Table>> tables_;
};

net::Socket connect_node(const net::Endpoint& node) {
  try {
    return net::connect_tcp(node);
  } catch (const Error& e) {
    raise(ErrorCode::kPeerUnreachable, e.what());
  }
}

struct StreamResult {
  std::uint64_t payload_bytes = 0;
  std::uint64_t bytes = 0;
  std::vector<std::uint64_t> keys;
};

StreamResult receive(int fd, std::uint64_t width, std::uint64_t threshold, bool filter_locally) {
  StreamResult r;
  std::vector<std::byte> batch;
  std::byte header[kBatchHeaderBytes];
  for (;;) {
    if (!net::read_exact(fd, header, sizeof(header))) raise(ErrorCode::kPeerClosed, "scan stream ended early");
    r.bytes += sizeof(header);
    const std::uint64_t n = net::get_u64(header);
    if (n == 0) break;
    if (n > kBatchTuples) raise(ErrorCode::kProtocol, "batch of " + std::to_string(n) + " tuples");
    batch.resize(n * width);
    if (!net::read_exact(fd, batch.data(), batch.size())) raise(ErrorCode::kPeerClosed, "scan stream ended early");
    r.bytes += batch.size();
    r.payload_bytes += batch.size();
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t key = net::get_u64(batch.data() + i * width);
      if (key < threshold) {
        r.keys.push_back(key);
      } else if (!filter_locally) {
        raise(ErrorCode::kProtocol, "storage node returned a non-qualifying tuple");
      }
    }
  }
  return r;
}

}  // namespace

std::string TableSpec::file_name() const {
  return "table-" + std::to_string(tuple_count) + "x" + std::to_string(tuple_width) + "-" +
         std::to_string(seed) + ".bin";
}

std::vector<std::uint64_t> key_permutation(std::uint64_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> p(n);
  for (std::uint64_t i = 0; i < n; ++i) p[i] = i;
  Xorshift64Star rng(seed);
  for (std::uint64_t i = n; i-- > 1;) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

void fill_payload(std::span<std::byte> payload, std::uint64_t seed, std::uint64_t key) noexcept {
  Xorshift64Star rng(mix64(seed ^ mix64(key)));
  for (std::size_t i = 0; i < payload.size(); i += 8) {
    const std::uint64_t v = rng.next();
    for (std::size_t b = 0; b < 8 && i + b < payload.size(); ++b) {
      payload[i + b] = static_cast<std::byte>(v >> (8 * b));
    }
  }
}

void generate_table(const TableSpec& spec, const fs::path& path) {
  validate(spec);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  const auto keys = key_permutation(spec.tuple_count, spec.seed);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::kIo, "cannot create " + tmp.string());
    constexpr std::size_t kChunkTuples = 4096;
    std::vector<std::byte> chunk(kChunkTuples * spec.tuple_width);
    for (std::uint64_t i = 0; i < spec.tuple_count; i += kChunkTuples) {
      const std::uint64_t n = std::min<std::uint64_t>(kChunkTuples, spec.tuple_count - i);
      for (std::uint64_t j = 0; j < n; ++j) {
        std::byte* t = chunk.data() + j * spec.tuple_width;
        net::put_u64(t, keys[i + j]);
        fill_payload({t + 8, spec.tuple_width - 8}, spec.seed, keys[i + j]);
      }
      out.write(reinterpret_cast<const char*>(chunk.data()),
                static_cast<std::streamsize>(n * spec.tuple_width));
    }
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      raise(ErrorCode::kInsufficientSpace, "writing " + path.string() + " failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) raise(ErrorCode::kIo, path.string() + ": " + ec.message());
}

std::uint64_t threshold_for(double selectivity, std::uint64_t n) noexcept {
  if (selectivity <= 0.0) return 0;
  if (selectivity >= 1.0) return n;
  return std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::floor(selectivity * static_cast<double>(n))));
}

Table::Table(const fs::path& path, const TableSpec& spec) : spec_(spec) {
  const int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) raise(ErrorCode::kTableMissing, path.string() + " not found");
  const std::size_t want = spec.tuple_count * spec.tuple_width;
  std::error_code ec;
  const auto have = fs::file_size(path, ec);
  if (ec || have != want) {
    ::close(fd);
    raise(ErrorCode::kTableMissing, path.string() + " has " + std::to_string(have) + " bytes, expected " +
                                        std::to_string(want));
  }
  void* p = ::mmap(nullptr, want, PROT_READ, MAP_SHARED, fd, 0);
  ::close(fd);
  if (p == MAP_FAILED) raise(ErrorCode::kIo, "mmap " + path.string());
  base_ = static_cast<const std::byte*>(p);
  mapped_ = want;
}

Table::~Table() {
  if (base_ != nullptr) ::munmap(const_cast<std::byte*>(base_), mapped_);
}

std::uint64_t Table::key(std::uint64_t i) const noexcept { return net::get_u64(tuple(i)); }

std::unique_ptr<net::TcpServer> start_storage_node(const std::string& host, std::uint16_t port,
                                                   const fs::path& table_dir) {
  auto node = std::make_shared<Node>(table_dir);
  return std::make_unique<net::TcpServer>(host, port, [node](net::Socket& s) { node->handle(s); });
}

void request_table(const net::Endpoint& node, const TableSpec& spec) {
  validate(spec);
  net::Socket s = connect_node(node);
  Request r;
  r.op = 'T';
  r.spec = spec;
  net::write_frame(s.fd(), encode(r));
  expect_ok(s.fd());
}

ScanOutcome run_scan(const ScanParams& p) {
  validate(p.table);
  if (p.dpu_cores == 0) raise(ErrorCode::kInvalidParameter, "dpu_cores must be >= 1");
  if (!(p.selectivity >= 0.0 && p.selectivity <= 1.0)) {
    raise(ErrorCode::kInvalidParameter, "selectivity must be within [0, 1]");
  }
  const std::uint64_t n = p.table.tuple_count;
  const std::uint64_t threshold = threshold_for(p.selectivity, n);
  const bool baseline = p.mode == Mode::kBaseline;
  const unsigned streams = baseline ? 1 : p.dpu_cores;

  std::vector<net::Socket> sockets;
  for (unsigned i = 0; i < streams; ++i) sockets.push_back(connect_node(p.node));

  std::vector<StreamResult> results(streams);
  std::vector<std::exception_ptr> errors(streams);
  std::vector<std::thread> receivers;
  const std::int64_t start = now_ns();
  for (unsigned i = 0; i < streams; ++i) {
    receivers.emplace_back([&, i] {
      try {
        Request r;
        r.op = 'S';
        r.spec = p.table;
        // Static range partition: stream i scans [i*n/streams, (i+1)*n/streams).
        r.lo = static_cast<std::uint64_t>((static_cast<unsigned __int128>(n) * i) / streams);
        r.hi = static_cast<std::uint64_t>((static_cast<unsigned __int128>(n) * (i + 1)) / streams);
        r.threshold = baseline ? kNoFilter : threshold;
        r.slowdown = p.slowdown;
        net::write_frame(sockets[i].fd(), encode(r));
        expect_ok(sockets[i].fd());
        results[i] = receive(sockets[i].fd(), p.table.tuple_width, threshold, baseline);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : receivers) t.join();
  const std::int64_t end = now_ns();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ScanOutcome out;
  out.tuples_scanned = n;
  out.elapsed_ns = end - start;
  for (auto& r : results) {
    out.payload_bytes += r.payload_bytes;
    out.bytes_transferred += r.bytes;
    out.keys.insert(out.keys.end(), r.keys.begin(), r.keys.end());
  }
  std::sort(out.keys.begin(), out.keys.end());
  out.qualifying = out.keys.size();
  return out;
}

std::uint64_t key_digest(std::span<const std::uint64_t> sorted_keys) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  std::byte buf[8];
  for (std::uint64_t k : sorted_keys) {
    net::put_u64(buf, k);
    h = fnv1a(std::span<const std::byte>(buf, 8), h);
  }
  return h;
}

}  // namespace bento::pushdown

namespace bento::tasks {

namespace {

using namespace bento::pushdown;

class PushdownTask final : public Task {
 public:
  void prepare(TaskContext& ctx, std::span<const TestCase> tests) override {
    std::set<std::pair<std::string, std::string>> done;
    for (const auto& t : tests) {
      const net::Endpoint node = node_for(ctx, t);
      const TableSpec spec = spec_for(t);
      if (!done.emplace(node.to_string(), spec.file_name()).second) continue;
      ctx.log("generating " + spec.file_name() + " on " + node.to_string());
      request_table(node, spec);
    }
  }

  void run(TaskContext& ctx, const TestCase& t, SampleRecorder& out) override {
    ScanParams p;
    p.mode = t.get_string("mode") == "baseline" ? Mode::kBaseline : Mode::kPushdown;
    p.node = node_for(ctx, t);
    p.table = spec_for(t);
    p.selectivity = t.get_real("selectivity");
    p.dpu_cores = static_cast<unsigned>(t.get_int("dpu_cores"));
    p.slowdown = t.get_real("slowdown");

    const ScanOutcome outcome = run_scan(p);
    out.record("tuples_scanned", static_cast<double>(outcome.tuples_scanned), "tuples");
    out.record("bytes_transferred", static_cast<double>(outcome.bytes_transferred), "bytes");
    out.record(kElapsedMetric, static_cast<double>(outcome.elapsed_ns), "ns");
    out.meta()["qualifying"] = outcome.qualifying;
    out.meta()["threshold"] = threshold_for(p.selectivity, p.table.tuple_count);
    out.meta()["payload_bytes"] = outcome.payload_bytes;
    out.meta()["key_digest"] = hex64(key_digest(outcome.keys));
    out.meta()["tuple_count"] = p.table.tuple_count;
    out.meta()["storage_node"] = t.has("peer_address") ? p.node.to_string() : "loopback";
  }

  void clean(TaskContext&) override {}

 private:
  static TableSpec spec_for(const TestCase& t) {
    TableSpec spec;
    spec.tuple_width = static_cast<std::uint64_t>(t.get_int("tuple_width"));
    spec.tuple_count = static_cast<std::uint64_t>(t.get_int("scale")) / spec.tuple_width;
    spec.seed = static_cast<std::uint64_t>(t.get_int("seed"));
    if (spec.tuple_count == 0) raise(ErrorCode::kEmptyWorkload, "scale is smaller than one tuple");
    return spec;
  }

  net::Endpoint node_for(const TaskContext& ctx, const TestCase& t) {
    if (t.has("peer_address")) return *net::parse_endpoint(t.get_string("peer_address"));
    if (!loopback_) loopback_ = start_storage_node("127.0.0.1", 0, ctx.task_dir() / "tables");
    return loopback_->endpoint();
  }

  std::unique_ptr<net::TcpServer> loopback_;
};

}  // namespace

TaskDescriptor pushdown_descriptor() {
  TaskDescriptor d;
  d.name = "pred_pushdown";
  d.summary = "table scan shipped whole versus filtered at the storage node";
  d.schema = ParameterSchema({
      ParameterSpec::enumeration("mode", {"baseline", "pushdown"}, "pushdown"),
      ParameterSpec::size("scale", kMinTupleWidth, 1ULL << 50, "256MB").describe("table bytes"),
      ParameterSpec::size("tuple_width", kMinTupleWidth, kMaxTupleWidth, kDefaultTupleWidth),
      ParameterSpec::real("selectivity", 0.0, 1.0, 0.01),
      ParameterSpec::integer("dpu_cores", 1, 256, 1).describe("filter workers at the storage node"),
      ParameterSpec::real("slowdown", 1.0, 1e6, 1.0).describe("per-tuple filter cost multiplier"),
      ParameterSpec::string("peer_address")
          .check([](std::string_view s) { return net::parse_endpoint(s).has_value(); })
          .describe("storage node host:port; an in-process node when absent"),
      ParameterSpec::integer("seed", 0, INT64_MAX, 42),
  });
  d.metrics = {
      {"throughput", MetricClass::kRate, "tuples_scanned", "tuples/s", 1.0,
       "tuples scanned per second"},
      {"bytes_transferred", MetricClass::kDistribution, "bytes_transferred", "bytes", 1.0,
       "bytes streamed from the storage node, framing included"},
  };
  d.factory = [] { return std::make_unique<PushdownTask>(); };
  return d;
}

}  // namespace bento::tasks
