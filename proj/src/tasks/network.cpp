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

#include "bento/network.hpp"

#include <sys/socket.h>

#include <semaphore>
#include <thread>

#include "bento/error.hpp"
#include "bento/rng.hpp"
#include "bento/tasks.hpp"
#include "bento/util.hpp"

namespace bento::network {

namespace {

constexpr std::int64_t kSinkAcceptTimeoutNs = 60'000'000'000;

struct Connection {
  net::Socket socket;
  std::vector<std::byte> base;  // message body with seq 0
};

class Checker {
 public:
  Checker(const SourceParams& p, const std::vector<std::byte>& base, ConnectionResult& r)
      : p_(p), expected_(base), r_(r) {}

  void on_echo(std::span<const std::byte> echo, std::uint64_t expected_seq) {
    if (echo.size() != p_.message_size || net::get_u64(echo.data()) != expected_seq) {
      ++r_.mismatches;
      return;
    }
    if (p_.queue_depth == 1 || expected_seq % p_.verify_every == 0) {
      net::put_u64(expected_.data(), expected_seq);
      const std::uint64_t want = fnv1a(expected_);
      const std::uint64_t got = fnv1a(echo);
      r_.sent_digest ^= want;
      r_.received_digest ^= got;
      ++r_.verified;
      if (want != got) ++r_.mismatches;
    }
  }

 private:
  const SourceParams& p_;
  std::vector<std::byte> expected_;
  ConnectionResult& r_;
};

bool keep_sending(const SourceParams& p, std::uint64_t seq, std::int64_t deadline) {
  if (p.messages_per_connection != 0) return seq < p.messages_per_connection;
  return now_ns() < deadline;
}

// Closed loop: one message in flight, send and receive on one thread.
void ping_pong(const SourceParams& p, Connection& c, std::int64_t deadline, ConnectionResult& r) {
  std::vector<std::byte> msg = c.base;
  std::vector<std::byte> echo;
  Checker check(p, c.base, r);
  for (std::uint64_t seq = 0; keep_sending(p, seq, deadline); ++seq) {
    net::put_u64(msg.data(), seq);
    const std::int64_t sent = now_ns();
    net::write_frame(c.socket.fd(), msg);
    if (!net::read_frame(c.socket.fd(), echo)) raise(ErrorCode::kPeerClosed, "sink closed the connection");
    const std::int64_t got = now_ns();
    r.rtt.push_back({static_cast<double>(got - sent), got});
    r.max_outstanding = 1;
    check.on_echo(echo, seq);
    ++r.messages;
    r.last_receive_ns = got;
  }
  c.socket.shutdown_write();
}

// Windowed: a sender thread keeps up to queue_depth messages unacknowledged
// while this thread receives echoes in order.
void windowed(const SourceParams& p, Connection& c, std::int64_t deadline, ConnectionResult& r) {
  std::counting_semaphore<kMaxQueueDepth> window(p.queue_depth);
  std::vector<std::atomic<std::int64_t>> send_ns(p.queue_depth);
  std::atomic<std::uint64_t> sent{0};
  std::atomic<bool> abort{false};
  std::exception_ptr send_error;

  std::thread sender([&] {
    try {
      std::vector<std::byte> msg = c.base;
      for (std::uint64_t seq = 0; keep_sending(p, seq, deadline); ++seq) {
        window.acquire();
        if (abort.load()) break;
        net::put_u64(msg.data(), seq);
        send_ns[seq % p.queue_depth].store(now_ns(), std::memory_order_release);
        net::write_frame(c.socket.fd(), msg);
        sent.store(seq + 1, std::memory_order_release);
      }
      c.socket.shutdown_write();
    } catch (...) {
      send_error = std::current_exception();
      ::shutdown(c.socket.fd(), SHUT_RDWR);
    }
  });

  std::exception_ptr recv_error;
  try {
    std::vector<std::byte> echo;
    Checker check(p, c.base, r);
    std::uint64_t seq = 0;
    while (net::read_frame(c.socket.fd(), echo)) {
      const std::int64_t got = now_ns();
      const std::uint64_t outstanding = sent.load(std::memory_order_acquire) - seq;
      r.max_outstanding = std::max(r.max_outstanding, outstanding);
      const std::int64_t at = send_ns[seq % p.queue_depth].load(std::memory_order_acquire);
      r.rtt.push_back({static_cast<double>(got - at), got});
      check.on_echo(echo, seq);
      ++seq;
      ++r.messages;
      r.last_receive_ns = got;
      window.release();
    }
  } catch (...) {
    recv_error = std::current_exception();
    abort.store(true);
    window.release(p.queue_depth);
  }
  sender.join();
  if (send_error) std::rethrow_exception(send_error);
  if (recv_error) std::rethrow_exception(recv_error);
  if (r.messages != sent.load()) {
    raise(ErrorCode::kPeerClosed, std::to_string(sent.load() - r.messages) + " messages not echoed");
  }
}

}  // namespace

void fill_message(std::span<std::byte> message, std::uint64_t seed, unsigned conn,
                  std::uint64_t seq) {
  Xorshift64Star rng(worker_seed(seed, conn));
  for (std::size_t i = 8; i < message.size(); i += 8) {
    const std::uint64_t v = rng.next();
    for (std::size_t b = 0; b < 8 && i + b < message.size(); ++b) {
      message[i + b] = static_cast<std::byte>(v >> (8 * b));
    }
  }
  std::byte stamp[8];
  net::put_u64(stamp, seq);
  for (std::size_t b = 0; b < 8 && b < message.size(); ++b) message[b] = stamp[b];
}

SourceOutcome run_source(const SourceParams& p) {
  if (p.message_size < kMinMessageBytes || p.message_size > kMaxMessageBytes) {
    raise(ErrorCode::kInvalidParameter, "message size " + std::to_string(p.message_size) +
                                            " outside [" + std::to_string(kMinMessageBytes) + ", " +
                                            std::to_string(kMaxMessageBytes) + "]");
  }
  if (p.queue_depth == 0 || p.queue_depth > kMaxQueueDepth || p.connections == 0 ||
      p.verify_every == 0) {
    raise(ErrorCode::kInvalidParameter, "queue_depth, connections and verify_every must be positive");
  }

  SourceOutcome out;
  out.nodelay = p.queue_depth == 1;
  std::vector<Connection> conns(p.connections);
  for (unsigned i = 0; i < p.connections; ++i) {
    conns[i].socket = net::connect_tcp(p.peer);
    net::set_nodelay(conns[i].socket, out.nodelay);
    conns[i].base.resize(p.message_size);
    fill_message(conns[i].base, p.seed, i, 0);
  }

  out.connections.resize(p.connections);
  std::vector<std::exception_ptr> errors(p.connections);
  std::vector<std::thread> workers;
  const std::int64_t start = now_ns();
  const std::int64_t deadline = start + p.duration_ns;
  for (unsigned i = 0; i < p.connections; ++i) {
    workers.emplace_back([&, i] {
      try {
        if (p.queue_depth == 1) {
          ping_pong(p, conns[i], deadline, out.connections[i]);
        } else {
          windowed(p, conns[i], deadline, out.connections[i]);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::int64_t last = start;
  std::uint64_t mismatches = 0;
  for (const auto& c : out.connections) {
    out.messages_completed += c.messages;
    mismatches += c.mismatches;
    last = std::max(last, c.last_receive_ns);
  }
  out.payload_bytes = out.messages_completed * p.message_size;
  out.elapsed_ns = last - start;
  if (mismatches != 0) {
    raise(ErrorCode::kProtocol, std::to_string(mismatches) + " echoes did not match what was sent");
  }
  return out;
}

void serve_echo(net::Socket& socket, SinkCounters* counters) {
  net::set_nodelay(socket, true);
  if (counters != nullptr) {
    ++counters->connections;
    ++counters->active;
  }
  std::vector<std::byte> frame;
  try {
    while (net::read_frame(socket.fd(), frame)) {
      net::write_frame(socket.fd(), frame);
      if (counters != nullptr) {
        counters->messages.fetch_add(1, std::memory_order_relaxed);
        counters->bytes.fetch_add(frame.size(), std::memory_order_relaxed);
      }
    }
  } catch (...) {
    if (counters != nullptr) --counters->active;
    throw;
  }
  if (counters != nullptr) --counters->active;
}

std::unique_ptr<net::TcpServer> start_sink(const std::string& host, std::uint16_t port,
                                           std::shared_ptr<SinkCounters> counters) {
  return std::make_unique<net::TcpServer>(host, port, [counters](net::Socket& s) {
    serve_echo(s, counters.get());
  });
}

}  // namespace bento::network

namespace bento::tasks {

namespace {

using namespace bento::network;

class NetworkTask final : public Task {
 public:
  void prepare(TaskContext& ctx, std::span<const TestCase> tests) override {
    for (const auto& t : tests) {
      if (t.get_string("role") == "source" && !t.has("peer_address") && !loopback_) {
        loopback_ = start_sink("127.0.0.1", 0);
        ctx.log("loopback sink on port " + std::to_string(loopback_->port()));
      }
    }
  }

  void run(TaskContext&, const TestCase& t, SampleRecorder& out) override {
    if (t.get_string("role") == "sink") {
      run_sink(t, out);
      return;
    }
    SourceParams p;
    if (t.has("peer_address")) {
      p.peer = *net::parse_endpoint(t.get_string("peer_address"));
    } else {
      if (!loopback_) loopback_ = start_sink("127.0.0.1", 0);
      p.peer = loopback_->endpoint();
    }
    p.message_size = static_cast<std::uint64_t>(t.get_int("data_size"));
    p.queue_depth = static_cast<unsigned>(t.get_int("queue_depth"));
    p.connections = static_cast<unsigned>(t.get_int("threads"));
    p.duration_ns = t.get_int("duration_ms") * 1'000'000;
    p.messages_per_connection = static_cast<std::uint64_t>(t.get_int("messages", 0));
    p.seed = static_cast<std::uint64_t>(t.get_int("seed"));

    SourceOutcome outcome = run_source(p);
    std::vector<TimedValue> rtt;
    std::uint64_t verified = 0;
    for (auto& c : outcome.connections) {
      out.record("payload_bytes", static_cast<double>(c.messages * p.message_size), "bytes");
      out.record("messages", static_cast<double>(c.messages), "messages");
      rtt.insert(rtt.end(), c.rtt.begin(), c.rtt.end());
      verified += c.verified;
    }
    out.record(kElapsedMetric, static_cast<double>(outcome.elapsed_ns), "ns");
    out.record_series("rtt", "ns", rtt);
    out.meta()["peer"] = t.has("peer_address") ? p.peer.to_string() : "loopback";
    out.meta()["nodelay"] = outcome.nodelay;
    out.meta()["messages_completed"] = outcome.messages_completed;
    out.meta()["echoes_verified"] = verified;
    out.meta()["framing"] = "u32le length + payload";
  }

  void clean(TaskContext&) override {}

 private:
  static void run_sink(const TestCase& t, SampleRecorder& out) {
    std::string host = "0.0.0.0";
    std::uint16_t port = 0;
    if (t.has("peer_address")) {
      auto ep = *net::parse_endpoint(t.get_string("peer_address"));
      host = ep.host;
      port = ep.port;
    }
    auto counters = std::make_shared<SinkCounters>();
    auto server = start_sink(host, port, counters);
    const std::int64_t start = now_ns();
    // Serve until every source that connected has closed again.
    while (counters->connections.load() == 0 && now_ns() - start < kSinkAcceptTimeoutNs) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    while (counters->active.load() != 0) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    server->stop();
    out.record("payload_bytes", static_cast<double>(counters->bytes.load()), "bytes");
    out.record("messages", static_cast<double>(counters->messages.load()), "messages");
    out.record(kElapsedMetric, static_cast<double>(now_ns() - start), "ns");
    out.meta()["listen"] = host + ":" + std::to_string(server->port());
    out.meta()["connections"] = counters->connections.load();
  }

  std::unique_ptr<net::TcpServer> loopback_;
};

}  // namespace

TaskDescriptor network_descriptor() {
  TaskDescriptor d;
  d.name = "net_tcp";
  d.summary = "TCP round-trip latency and bandwidth against an echo sink";
  d.schema = ParameterSchema({
      ParameterSpec::enumeration("role", {"source", "sink"}, "source"),
      ParameterSpec::string("peer_address")
          .check([](std::string_view s) { return net::parse_endpoint(s).has_value(); })
          .describe("host:port of the sink (source) or to listen on (sink); "
                    "a source without it uses an in-process loopback sink"),
      ParameterSpec::size("data_size", kMinMessageBytes, kMaxMessageBytes, 32)
          .alias("message_size"),
      ParameterSpec::integer("queue_depth", 1, kMaxQueueDepth, 1),
      ParameterSpec::integer("threads", 1, 1024, 1).alias("connections"),
      ParameterSpec::integer("duration_ms", 1, 3'600'000, 1000),
      ParameterSpec::integer("messages", 1, INT64_MAX)
          .describe("fixed message count per connection instead of duration_ms"),
      ParameterSpec::integer("seed", 0, INT64_MAX, 42),
  });
  d.metrics = {
      {"p50", MetricClass::kDistribution, "rtt", "ns", 1.0, "median round-trip time"},
      {"p99", MetricClass::kDistribution, "rtt", "ns", 1.0, "99th percentile round-trip time"},
      {"avg_latency", MetricClass::kDistribution, "rtt", "ns", 1.0, "mean round-trip time"},
      {"bandwidth", MetricClass::kRate, "payload_bytes", "Gbps", 8.0 / 1e9,
       "one-way payload bits per second"},
  };
  d.factory = [] { return std::make_unique<NetworkTask>(); };
  return d;
}

}  // namespace bento::tasks
