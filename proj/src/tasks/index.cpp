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

#include "bento/index.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <mutex>
#include <shared_mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "bento/error.hpp"
#include "bento/tasks.hpp"
#include "bento/util.hpp"

namespace bento::index {

namespace {

using Bytes = std::vector<std::byte>;

class Writer {
 public:
  Writer& u8(std::uint8_t v) {
    out_.push_back(static_cast<std::byte>(v));
    return *this;
  }
  Writer& u32(std::uint32_t v) {
    const auto n = out_.size();
    out_.resize(n + 4);
    net::put_u32(out_.data() + n, v);
    return *this;
  }
  Writer& u64(std::uint64_t v) {
    const auto n = out_.size();
    out_.resize(n + 8);
    net::put_u64(out_.data() + n, v);
    return *this;
  }
  Writer& bytes(std::span<const std::byte> b) {
    out_.insert(out_.end(), b.begin(), b.end());
    return *this;
  }
  Bytes& take() { return out_; }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> in) : in_(in) {}
  bool ok() const noexcept { return ok_; }
  bool done() const noexcept { return pos_ == in_.size(); }
  std::uint8_t u8() { return need(1) ? static_cast<std::uint8_t>(in_[pos_++]) : 0; }
  std::uint32_t u32() {
    if (!need(4)) return 0;
    pos_ += 4;
    return net::get_u32(in_.data() + pos_ - 4);
  }
  std::uint64_t u64() {
    if (!need(8)) return 0;
    pos_ += 8;
    return net::get_u64(in_.data() + pos_ - 8);
  }
  std::span<const std::byte> bytes(std::size_t n) {
    if (!need(n)) return {};
    pos_ += n;
    return in_.subspan(pos_ - n, n);
  }
  std::span<const std::byte> rest() {
    auto r = in_.subspan(pos_);
    pos_ = in_.size();
    return r;
  }

 private:
  bool need(std::size_t n) {
    if (in_.size() - pos_ < n) ok_ = false;
    return ok_;
  }
  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

struct Partition {
  std::shared_mutex mu;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::map<std::uint64_t, Bytes> records;

  bool owns(std::uint64_t key) const noexcept { return key >= lo && key < hi; }
};

Bytes status_only(Status s) { return Writer().u8(static_cast<std::uint8_t>(s)).take(); }

Bytes serve(Partition& part, std::span<const std::byte> request) {
  Reader in(request);
  const char op = static_cast<char>(in.u8());
  switch (op) {
    case 'I': {
      const std::uint64_t lo = in.u64();
      const std::uint64_t hi = in.u64();
      if (!in.ok() || !in.done() || lo > hi) return status_only(Status::kBadRequest);
      std::unique_lock lock(part.mu);
      part.records.clear();
      part.lo = lo;
      part.hi = hi;
      return status_only(Status::kOk);
    }
    case 'G': {
      const std::uint64_t key = in.u64();
      if (!in.ok() || !in.done()) return status_only(Status::kBadRequest);
      std::shared_lock lock(part.mu);
      if (!part.owns(key)) return status_only(Status::kWrongPartition);
      auto it = part.records.find(key);
      if (it == part.records.end()) return status_only(Status::kNotFound);
      return Writer().u8(0).bytes(it->second).take();
    }
    case 'P': {
      const std::uint64_t key = in.u64();
      const auto value = in.rest();
      if (!in.ok()) return status_only(Status::kBadRequest);
      std::unique_lock lock(part.mu);
      if (!part.owns(key)) return status_only(Status::kWrongPartition);
      part.records[key].assign(value.begin(), value.end());
      return status_only(Status::kOk);
    }
    case 'B': {
      const std::uint64_t n = in.u64();
      std::vector<std::pair<std::uint64_t, std::span<const std::byte>>> batch;
      for (std::uint64_t i = 0; i < n && in.ok(); ++i) {
        const std::uint64_t key = in.u64();
        const std::uint32_t len = in.u32();
        batch.emplace_back(key, in.bytes(len));
      }
      if (!in.ok() || !in.done()) return status_only(Status::kBadRequest);
      std::unique_lock lock(part.mu);
      for (const auto& [key, value] : batch) {
        if (!part.owns(key)) return status_only(Status::kWrongPartition);
      }
      for (const auto& [key, value] : batch) part.records[key].assign(value.begin(), value.end());
      return status_only(Status::kOk);
    }
    case 'C': {
      if (!in.done()) return status_only(Status::kBadRequest);
      std::shared_lock lock(part.mu);
      return Writer().u8(0).u64(part.records.size()).take();
    }
    case 'R': {
      const std::uint64_t lo = in.u64();
      const std::uint64_t hi = in.u64();
      if (!in.ok() || !in.done()) return status_only(Status::kBadRequest);
      std::shared_lock lock(part.mu);
      Writer out;
      std::uint64_t n = 0;
      Writer body;
      for (auto it = part.records.lower_bound(lo); it != part.records.end() && it->first < hi; ++it) {
        body.u64(it->first).u32(static_cast<std::uint32_t>(it->second.size())).bytes(it->second);
        ++n;
      }
      out.u8(0).u64(n).bytes(body.take());
      return std::move(out.take());
    }
    default:
      return status_only(Status::kBadRequest);
  }
}

void serve_connection(Partition& part, net::Socket& s) {
  net::set_nodelay(s, true);
  Bytes request;
  while (net::read_frame(s.fd(), request)) net::write_frame(s.fd(), serve(part, request));
}

void fill_value_tail(std::span<std::byte> tail, std::uint64_t seed, std::uint64_t key,
                     std::uint64_t version) noexcept {
  Xorshift64Star rng(mix64(seed ^ mix64(key) ^ mix64(version)));
  for (std::size_t i = 0; i < tail.size(); i += 8) {
    const std::uint64_t v = rng.next();
    for (std::size_t b = 0; b < 8 && i + b < tail.size(); ++b) {
      tail[i + b] = static_cast<std::byte>(v >> (8 * b));
    }
  }
}

std::uint64_t value_size(const IndexParams& p) { return p.record_size - 8; }

void validate(const IndexParams& p) {
  if (p.record_count == 0) raise(ErrorCode::kInvalidParameter, "record_count must be >= 1");
  if (p.record_size < kMinRecordSize) {
    raise(ErrorCode::kInvalidParameter, "record_size must be >= " + std::to_string(kMinRecordSize));
  }
  if (p.threads == 0) raise(ErrorCode::kInvalidParameter, "threads must be >= 1");
  if (!(p.read_fraction >= 0.0 && p.read_fraction <= 1.0)) {
    raise(ErrorCode::kInvalidParameter, "op read fraction must be within [0, 1]");
  }
}

constexpr std::uint64_t kScanChunk = 16 * 1024;

}  // namespace

std::optional<SplitRatio> parse_split_ratio(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  SplitRatio r;
  auto parse = [](std::string_view s, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  if (!parse(text.substr(0, colon), r.host) || !parse(text.substr(colon + 1), r.dpu)) return std::nullopt;
  if (r.host == 0 && r.dpu == 0) return std::nullopt;
  return r;
}

std::uint64_t split_boundary(std::uint64_t record_count, SplitRatio ratio) noexcept {
  const unsigned __int128 total = static_cast<unsigned __int128>(ratio.host) + ratio.dpu;
  if (total == 0) return record_count;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(record_count) * ratio.host / total);
}

double ZipfianGenerator::zeta(std::uint64_t n, double theta) noexcept {
  double sum = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) sum += 1.0 / std::pow(static_cast<double>(i), theta);
  return sum;
}

ZipfianGenerator::ZipfianGenerator(std::uint64_t n, double theta, std::uint64_t seed)
    : n_(n == 0 ? 1 : n), theta_(theta), rng_(seed) {
  alpha_ = 1.0 / (1.0 - theta_);
  zetan_ = zeta(n_, theta_);
  const double zeta2 = zeta(2, theta_);
  eta_ = (1.0 - std::pow(2.0 / static_cast<double>(n_), 1.0 - theta_)) / (1.0 - zeta2 / zetan_);
  half_pow_theta_ = 1.0 + std::pow(0.5, theta_);
}

std::uint64_t ZipfianGenerator::next() noexcept {
  const double u = rng_.unit();
  const double uz = u * zetan_;
  if (uz < 1.0) return 0;
  if (uz < half_pow_theta_) return std::min<std::uint64_t>(1, n_ - 1);
  const auto r = static_cast<std::uint64_t>(static_cast<double>(n_) * std::pow(eta_ * u - eta_ + 1.0, alpha_));
  return std::min(r, n_ - 1);
}

std::vector<std::byte> make_value(std::uint64_t seed, std::uint64_t key, std::uint64_t version,
                                  std::uint64_t size) {
  Bytes v(size);
  std::byte stamp[8];
  net::put_u64(stamp, version);
  std::memcpy(v.data(), stamp, std::min<std::size_t>(8, size));
  if (size > 8) fill_value_tail({v.data() + 8, size - 8}, seed, key, version);
  return v;
}

std::optional<std::uint64_t> decode_value(std::span<const std::byte> value, std::uint64_t seed,
                                          std::uint64_t key) {
  if (value.size() < 8) return std::nullopt;
  const std::uint64_t version = net::get_u64(value.data());
  const Bytes expected = make_value(seed, key, version, value.size());
  if (!std::equal(value.begin(), value.end(), expected.begin())) return std::nullopt;
  return version;
}

std::unique_ptr<net::TcpServer> start_partition_server(const std::string& host, std::uint16_t port) {
  auto part = std::make_shared<Partition>();
  return std::make_unique<net::TcpServer>(host, port,
                                          [part](net::Socket& s) { serve_connection(*part, s); });
}

PartitionClient::PartitionClient(const net::Endpoint& server) {
  try {
    socket_ = net::connect_tcp(server);
  } catch (const Error& e) {
    raise(ErrorCode::kServerUnreachable, e.what());
  }
  net::set_nodelay(socket_, true);
}

std::vector<std::byte> PartitionClient::call(std::span<const std::byte> request) {
  net::write_frame(socket_.fd(), request);
  if (!net::read_frame(socket_.fd(), reply_) || reply_.empty()) {
    raise(ErrorCode::kServerUnreachable, "partition server closed the connection");
  }
  switch (static_cast<Status>(reply_[0])) {
    case Status::kOk:
    case Status::kNotFound: return reply_;
    case Status::kWrongPartition: raise(ErrorCode::kRoutingError, "key sent to the wrong partition");
    default: raise(ErrorCode::kProtocol, "partition server rejected the request");
  }
}

void PartitionClient::init(std::uint64_t lo, std::uint64_t hi) {
  call(Writer().u8('I').u64(lo).u64(hi).take());
}

std::optional<std::vector<std::byte>> PartitionClient::get(std::uint64_t key) {
  const auto& r = call(Writer().u8('G').u64(key).take());
  if (static_cast<Status>(r[0]) == Status::kNotFound) return std::nullopt;
  return Bytes(r.begin() + 1, r.end());
}

void PartitionClient::put(std::uint64_t key, std::span<const std::byte> value) {
  call(Writer().u8('P').u64(key).bytes(value).take());
}

void PartitionClient::bulk_put(std::span<const std::pair<std::uint64_t, std::vector<std::byte>>> records) {
  Writer w;
  w.u8('B').u64(records.size());
  for (const auto& [key, value] : records) w.u64(key).u32(static_cast<std::uint32_t>(value.size())).bytes(value);
  call(w.take());
}

std::uint64_t PartitionClient::count() {
  const auto r = call(Writer().u8('C').take());
  Reader in(r);
  in.u8();
  const std::uint64_t n = in.u64();
  if (!in.ok()) raise(ErrorCode::kProtocol, "short count reply");
  return n;
}

std::map<std::uint64_t, std::vector<std::byte>> PartitionClient::scan(std::uint64_t lo, std::uint64_t hi) {
  const auto r = call(Writer().u8('R').u64(lo).u64(hi).take());
  Reader in(r);
  in.u8();
  const std::uint64_t n = in.u64();
  std::map<std::uint64_t, Bytes> out;
  for (std::uint64_t i = 0; i < n && in.ok(); ++i) {
    const std::uint64_t key = in.u64();
    const auto value = in.bytes(in.u32());
    out.emplace(key, Bytes(value.begin(), value.end()));
  }
  if (!in.ok()) raise(ErrorCode::kProtocol, "short scan reply");
  return out;
}

LoadResult load_index(const IndexParams& p) {
  validate(p);
  LoadResult r;
  r.boundary = split_boundary(p.record_count, p.split);
  PartitionClient host(p.host);
  PartitionClient dpu(p.dpu);
  host.init(0, r.boundary);
  dpu.init(r.boundary, p.record_count);
  constexpr std::uint64_t kBatch = 1024;
  std::vector<std::pair<std::uint64_t, Bytes>> batch;
  for (std::uint64_t lo = 0; lo < p.record_count; lo += kBatch) {
    const std::uint64_t hi = std::min(p.record_count, lo + kBatch);
    batch.clear();
    // Batches never straddle the boundary.
    const std::uint64_t end = (lo < r.boundary && hi > r.boundary) ? r.boundary : hi;
    for (std::uint64_t k = lo; k < end; ++k) batch.emplace_back(k, make_value(p.seed, k, 0, value_size(p)));
    (lo < r.boundary ? host : dpu).bulk_put(batch);
    if (end != hi) {
      batch.clear();
      for (std::uint64_t k = end; k < hi; ++k) batch.emplace_back(k, make_value(p.seed, k, 0, value_size(p)));
      dpu.bulk_put(batch);
    }
  }
  r.host_keys = host.count();
  r.dpu_keys = dpu.count();
  return r;
}

IndexOutcome run_index_workload(const IndexParams& p) {
  validate(p);
  const std::uint64_t boundary = split_boundary(p.record_count, p.split);
  struct Worker {
    std::uint64_t host_ops = 0, dpu_ops = 0, reads = 0, writes = 0, mismatches = 0;
    std::vector<WriteRecord> writes_log;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> read_versions;  // nonzero only
    std::exception_ptr error;
  };
  std::vector<Worker> workers(p.threads);
  std::vector<std::unique_ptr<PartitionClient>> host_clients, dpu_clients;
  for (unsigned w = 0; w < p.threads; ++w) {
    host_clients.push_back(std::make_unique<PartitionClient>(p.host));
    dpu_clients.push_back(std::make_unique<PartitionClient>(p.dpu));
  }

  const std::int64_t start = now_ns();
  const std::int64_t deadline = start + p.duration_ns;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < p.threads; ++w) {
    threads.emplace_back([&, w] {
      Worker& me = workers[w];
      try {
        Xorshift64Star keys(worker_seed(p.seed, w));
        Xorshift64Star ops(worker_seed(p.seed ^ 0x6F70ULL, w));
        std::optional<ZipfianGenerator> zipf;
        if (p.pattern == KeyPattern::kZipfian) zipf.emplace(p.record_count, kZipfTheta, worker_seed(p.seed, w));
        std::uint64_t counter = 0;
        for (std::uint64_t i = 0;; ++i) {
          if (p.ops_per_thread != 0 ? i >= p.ops_per_thread : now_ns() >= deadline) break;
          const std::uint64_t key = zipf ? zipf->next() : keys.below(p.record_count);
          const bool on_host = key < boundary;
          PartitionClient& c = on_host ? *host_clients[w] : *dpu_clients[w];
          ++(on_host ? me.host_ops : me.dpu_ops);
          if (ops.unit() < p.read_fraction) {
            ++me.reads;
            const auto value = c.get(key);
            const auto version = value ? decode_value(*value, p.seed, key) : std::nullopt;
            if (!version) {
              ++me.mismatches;
            } else if (*version != 0) {
              me.read_versions.emplace_back(key, *version);
            }
          } else {
            ++me.writes;
            const std::uint64_t version = (static_cast<std::uint64_t>(w + 1) << 40) | ++counter;
            const Bytes value = make_value(p.seed, key, version, value_size(p));
            WriteRecord rec{key, version, now_ns(), 0};
            c.put(key, value);
            rec.ack_ns = now_ns();
            me.writes_log.push_back(rec);
          }
        }
      } catch (...) {
        me.error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  IndexOutcome out;
  out.elapsed_ns = now_ns() - start;
  for (auto& w : workers) {
    if (w.error) std::rethrow_exception(w.error);
  }
  std::unordered_map<std::uint64_t, std::unordered_set<std::uint64_t>> written;
  for (auto& w : workers) {
    out.host_ops += w.host_ops;
    out.dpu_ops += w.dpu_ops;
    out.reads += w.reads;
    out.writes += w.writes;
    out.read_mismatches += w.mismatches;
    for (const auto& rec : w.writes_log) written[rec.key].insert(rec.version);
    out.write_log.insert(out.write_log.end(), w.writes_log.begin(), w.writes_log.end());
  }
  for (const auto& w : workers) {
    for (const auto& [key, version] : w.read_versions) {
      auto it = written.find(key);
      if (it == written.end() || !it->second.contains(version)) ++out.read_version_violations;
    }
  }
  return out;
}

AuditResult audit_history(const IndexParams& p, std::span<const WriteRecord> writes) {
  const std::uint64_t boundary = split_boundary(p.record_count, p.split);
  std::unordered_map<std::uint64_t, std::vector<const WriteRecord*>> by_key;
  for (const auto& w : writes) by_key[w.key].push_back(&w);

  AuditResult r;
  auto violate = [&r](std::string what) {
    if (r.violations++ == 0) r.first_violation = std::move(what);
  };
  PartitionClient host(p.host);
  PartitionClient dpu(p.dpu);
  for (std::uint64_t lo = 0; lo < p.record_count; lo += kScanChunk) {
    const std::uint64_t hi = std::min(p.record_count, lo + kScanChunk);
    std::map<std::uint64_t, Bytes> records;
    if (lo < boundary) records.merge(host.scan(lo, std::min(hi, boundary)));
    if (hi > boundary) records.merge(dpu.scan(std::max(lo, boundary), hi));
    for (std::uint64_t key = lo; key < hi; ++key) {
      ++r.keys_checked;
      auto rec = records.find(key);
      if (rec == records.end()) {
        violate("key " + std::to_string(key) + " missing");
        continue;
      }
      const auto version = decode_value(rec->second, p.seed, key);
      if (!version) {
        violate("key " + std::to_string(key) + " holds an undecodable value");
        continue;
      }
      auto it = by_key.find(key);
      if (it == by_key.end()) {
        if (*version != 0) violate("key " + std::to_string(key) + " was never written but holds version " + std::to_string(*version));
        continue;
      }
      std::int64_t last_invoke = INT64_MIN;
      for (const auto* w : it->second) last_invoke = std::max(last_invoke, w->invoke_ns);
      bool legal = false;
      for (const auto* w : it->second) {
        if (w->version == *version && w->ack_ns >= last_invoke) legal = true;
      }
      if (!legal) {
        violate("key " + std::to_string(key) + " holds version " + std::to_string(*version) +
                ", not a final write in acknowledged order");
      }
    }
  }
  return r;
}

}  // namespace bento::index

namespace bento::tasks {

namespace {

using namespace bento::index;

std::optional<std::pair<net::Endpoint, net::Endpoint>> parse_peers(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  auto a = net::parse_endpoint(text.substr(0, comma));
  auto b = net::parse_endpoint(text.substr(comma + 1));
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

class IndexTask final : public Task {
 public:
  void prepare(TaskContext& ctx, std::span<const TestCase> tests) override {
    if (tests.empty()) return;
    IndexParams p = params_for(tests.front());
    ensure_loaded(ctx, p);
  }

  void run(TaskContext& ctx, const TestCase& t, SampleRecorder& out) override {
    IndexParams p = params_for(t);
    const LoadResult load = ensure_loaded(ctx, p);
    const IndexOutcome outcome = run_index_workload(p);
    if (outcome.writes != 0) dirty_ = true;

    out.record("ops_done", static_cast<double>(outcome.host_ops), "ops");
    out.record("ops_done", static_cast<double>(outcome.dpu_ops), "ops");
    out.record(kElapsedMetric, static_cast<double>(outcome.elapsed_ns), "ns");
    out.meta()["boundary"] = load.boundary;
    out.meta()["host_keys"] = load.host_keys;
    out.meta()["dpu_keys"] = load.dpu_keys;
    out.meta()["host_ops"] = outcome.host_ops;
    out.meta()["dpu_ops"] = outcome.dpu_ops;
    out.meta()["reads"] = outcome.reads;
    out.meta()["writes"] = outcome.writes;
    out.meta()["partitions"] = t.has("peer_addresses") ? t.get_string("peer_addresses") : "loopback";

    if (outcome.read_mismatches != 0 || outcome.read_version_violations != 0) {
      raise(ErrorCode::kChecksumMismatch,
            std::to_string(outcome.read_mismatches + outcome.read_version_violations) +
                " reads returned values that were never loaded or written");
    }
    if (outcome.writes != 0) {
      const AuditResult audit = audit_history(p, outcome.write_log);
      out.meta()["audit"] = {{"keys_checked", audit.keys_checked}, {"violations", audit.violations}};
      if (audit.violations != 0) {
        raise(ErrorCode::kChecksumMismatch, "history audit: " + audit.first_violation);
      }
    }
  }

  void clean(TaskContext&) override {}

 private:
  IndexParams params_for(const TestCase& t) {
    IndexParams p;
    p.record_count = static_cast<std::uint64_t>(t.get_int("record_count"));
    p.record_size = static_cast<std::uint64_t>(t.get_int("record_size"));
    p.read_fraction = t.get_real("op");
    p.pattern = t.get_string("pattern") == "zipfian" ? KeyPattern::kZipfian : KeyPattern::kUniform;
    p.split = *parse_split_ratio(t.get_string("split_ratio"));
    p.threads = static_cast<unsigned>(t.get_int("threads"));
    p.duration_ns = t.get_int("duration_ms") * 1'000'000;
    p.ops_per_thread = static_cast<std::uint64_t>(t.get_int("ops", 0));
    p.seed = static_cast<std::uint64_t>(t.get_int("seed"));
    if (t.has("peer_addresses")) {
      auto peers = *parse_peers(t.get_string("peer_addresses"));
      p.host = peers.first;
      p.dpu = peers.second;
    } else {
      if (!host_server_) {
        host_server_ = start_partition_server("127.0.0.1", 0);
        dpu_server_ = start_partition_server("127.0.0.1", 0);
      }
      p.host = host_server_->endpoint();
      p.dpu = dpu_server_->endpoint();
    }
    return p;
  }

  LoadResult ensure_loaded(TaskContext& ctx, const IndexParams& p) {
    const std::string key = std::to_string(p.record_count) + "/" + std::to_string(p.record_size) +
                            "/" + std::to_string(p.seed) + "/" + std::to_string(p.split.host) + ":" +
                            std::to_string(p.split.dpu) + "/" + p.host.to_string() + "/" +
                            p.dpu.to_string();
    if (key != loaded_ || dirty_) {
      ctx.log("loading " + std::to_string(p.record_count) + " records");
      load_ = load_index(p);
      loaded_ = key;
      dirty_ = false;
    }
    return load_;
  }

  std::unique_ptr<net::TcpServer> host_server_;
  std::unique_ptr<net::TcpServer> dpu_server_;
  std::string loaded_;
  bool dirty_ = false;
  LoadResult load_;
};

}  // namespace

TaskDescriptor index_descriptor() {
  TaskDescriptor d;
  d.name = "index_offload";
  d.summary = "ordered-index throughput with keys split between host and coprocessor partitions";
  d.schema = ParameterSchema({
      ParameterSpec::integer("record_count", 1, INT64_MAX, 100'000).alias("scale"),
      ParameterSpec::size("record_size", kMinRecordSize, 1 << 20, 128),
      ParameterSpec::real("op", 0.0, 1.0, 1.0).describe("fraction of operations that are reads"),
      ParameterSpec::enumeration("pattern", {"uniform", "zipfian"}, "uniform"),
      ParameterSpec::string("split_ratio", "10:1")
          .check([](std::string_view s) { return parse_split_ratio(s).has_value(); })
          .describe("host:dpu share of the key range"),
      ParameterSpec::integer("threads", 1, 1024, 1),
      ParameterSpec::integer("duration_ms", 1, 3'600'000, 1000),
      ParameterSpec::integer("ops", 1, INT64_MAX)
          .describe("fixed operation count per client thread instead of duration_ms"),
      ParameterSpec::string("peer_addresses")
          .check([](std::string_view s) { return parse_peers(s).has_value(); })
          .describe("host_partition:port,dpu_partition:port; in-process servers when absent"),
      ParameterSpec::integer("seed", 0, INT64_MAX, 42),
  });
  d.metrics = {{"throughput", MetricClass::kRate, "ops_done", "ops/s", 1.0,
                "index operations per second across both partitions"}};
  d.factory = [] { return std::make_unique<IndexTask>(); };
  return d;
}

}  // namespace bento::tasks
