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

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bento/net.hpp"
#include "bento/task.hpp"

namespace bento::network {

/// The first 8 payload bytes carry the message sequence number.
inline constexpr std::uint64_t kMinMessageBytes = 8;
inline constexpr std::uint64_t kMaxMessageBytes = 32 * 1024;
inline constexpr unsigned kMaxQueueDepth = 128;

struct SourceParams {
  net::Endpoint peer;
  std::uint64_t message_size = 32;
  unsigned queue_depth = 1;
  unsigned connections = 1;
  std::int64_t duration_ns = 1'000'000'000;
  /// When non-zero each connection sends exactly this many messages.
  std::uint64_t messages_per_connection = 0;
  std::uint64_t seed = 42;
  /// Above queue depth 1, every verify_every-th echo is digest-checked;
  /// at queue depth 1 every echo is.
  std::uint64_t verify_every = 64;
};

struct ConnectionResult {
  std::uint64_t messages = 0;
  std::uint64_t verified = 0;     // echoes whose digest was compared
  std::uint64_t mismatches = 0;   // digest or sequence mismatches
  std::uint64_t max_outstanding = 0;
  /// XOR of fnv1a digests, over the verified sequence numbers, of the
  /// messages as sent and of their echoes as received.
  std::uint64_t sent_digest = 0;
  std::uint64_t received_digest = 0;
  std::int64_t last_receive_ns = 0;
  std::vector<TimedValue> rtt;  // ns, stamped at receive time
};

struct SourceOutcome {
  std::vector<ConnectionResult> connections;
  std::uint64_t messages_completed = 0;
  std::uint64_t payload_bytes = 0;  // one direction only
  std::int64_t elapsed_ns = 0;      // start to the last echo received
  bool nodelay = false;
};

/// Writes message `seq` of connection `conn`: seq little-endian in bytes
/// [0, 8), then bytes of Xorshift64Star(worker_seed(seed, conn)).
void fill_message(std::span<std::byte> message, std::uint64_t seed, unsigned conn,
                  std::uint64_t seq);

/// Throws ConnectFailed, PeerClosed, Protocol (echo mismatch) or
/// InvalidParameter.
SourceOutcome run_source(const SourceParams& params);

struct SinkCounters {
  std::atomic<std::uint64_t> connections{0};
  std::atomic<std::uint64_t> active{0};
  std::atomic<std::uint64_t> messages{0};
  std::atomic<std::uint64_t> bytes{0};
};

/// Echoes frames until the peer half-closes.
void serve_echo(net::Socket& socket, SinkCounters* counters = nullptr);

/// Echo sink on host:port (port 0 = ephemeral). Throws BindFailed.
std::unique_ptr<net::TcpServer> start_sink(const std::string& host, std::uint16_t port,
                                           std::shared_ptr<SinkCounters> counters = nullptr);

}  // namespace bento::network
