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
#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bento::net {

/// Frames larger than this are rejected as a protocol error.
inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) noexcept : fd_(fd) {}
  ~Socket() { close(); }
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const noexcept { return fd_; }
  explicit operator bool() const noexcept { return fd_ >= 0; }
  void close() noexcept;
  /// Half-close: the peer reads EOF after the bytes already sent.
  void shutdown_write() noexcept;

 private:
  int fd_ = -1;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
  std::string to_string() const { return host + ":" + std::to_string(port); }
};

/// Parses "host:port" (port 1..65535). nullopt when malformed.
std::optional<Endpoint> parse_endpoint(std::string_view text);

/// Throws BindFailed.
Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog = 128);
std::uint16_t local_port(const Socket& socket);
/// Throws ConnectFailed.
Socket connect_tcp(const Endpoint& peer, std::chrono::milliseconds timeout = std::chrono::seconds(5));
void set_nodelay(const Socket& socket, bool on);

/// Returns false on EOF before the first byte; throws PeerClosed on EOF
/// mid-buffer or a socket error.
bool read_exact(int fd, void* data, std::size_t size);
/// Throws PeerClosed.
void write_all(int fd, const void* data, std::size_t size);

void put_u32(std::byte* out, std::uint32_t v) noexcept;
void put_u64(std::byte* out, std::uint64_t v) noexcept;
std::uint32_t get_u32(const std::byte* in) noexcept;
std::uint64_t get_u64(const std::byte* in) noexcept;

/// Frame: 4-byte little-endian payload length, then the payload.
void write_frame(int fd, std::span<const std::byte> payload);
/// False on EOF at a frame boundary. Throws PeerClosed, or Protocol when the
/// announced length exceeds `max_bytes`.
bool read_frame(int fd, std::vector<std::byte>& payload, std::uint32_t max_bytes = kMaxFrameBytes);

/// Accept loop on its own thread, one handler thread per connection.
class TcpServer {
 public:
  using Handler = std::function<void(Socket&)>;

  /// Throws BindFailed. Port 0 picks an ephemeral port.
  TcpServer(const std::string& host, std::uint16_t port, Handler handler);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  Endpoint endpoint() const { return {host_, port_}; }
  /// Stops accepting, shuts down open connections and joins all threads.
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

 private:
  struct Connection {
    Socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void reap(bool all);

  std::string host_;
  std::uint16_t port_ = 0;
  Handler handler_;
  Socket listener_;
  std::thread acceptor_;
  std::mutex mu_;
  std::list<std::unique_ptr<Connection>> connections_;
  std::atomic<bool> stopping_{false};
  std::mutex stop_mu_;
  bool stopped_ = false;
};

}  // namespace bento::net
