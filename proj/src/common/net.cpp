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

#include "bento/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "bento/error.hpp"

namespace bento::net {

namespace {

std::string errno_text() { return std::strerror(errno); }

// Resolves host:port to an IPv4/IPv6 address list.
struct AddrList {
  addrinfo* head = nullptr;
  ~AddrList() {
    if (head != nullptr) ::freeaddrinfo(head);
  }
};

int resolve(const std::string& host, std::uint16_t port, bool passive, AddrList& out) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  const std::string service = std::to_string(port);
  return ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &out.head);
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void Socket::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::shutdown_write() noexcept {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
}

std::optional<Endpoint> parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) return std::nullopt;
  unsigned port = 0;
  const auto digits = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port == 0 || port > 65535) {
    return std::nullopt;
  }
  std::string host(text.substr(0, colon));
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  return Endpoint{std::move(host), static_cast<std::uint16_t>(port)};
}

Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog) {
  AddrList addrs;
  if (int rc = resolve(host, port, true, addrs); rc != 0) {
    raise(ErrorCode::kBindFailed, host + ":" + std::to_string(port) + ": " + ::gai_strerror(rc));
  }
  std::string last = "no usable address";
  for (addrinfo* ai = addrs.head; ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
    if (!s) {
      last = errno_text();
      continue;
    }
    int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(s.fd(), backlog) == 0) return s;
    last = errno_text();
  }
  raise(ErrorCode::kBindFailed, host + ":" + std::to_string(port) + ": " + last);
}

std::uint16_t local_port(const Socket& socket) {
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(socket.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) return 0;
  if (addr.ss_family == AF_INET) return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  if (addr.ss_family == AF_INET6) return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  return 0;
}

Socket connect_tcp(const Endpoint& peer, std::chrono::milliseconds timeout) {
  AddrList addrs;
  if (int rc = resolve(peer.host, peer.port, false, addrs); rc != 0) {
    raise(ErrorCode::kConnectFailed, peer.to_string() + ": " + ::gai_strerror(rc));
  }
  std::string last = "no usable address";
  for (addrinfo* ai = addrs.head; ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
    if (!s) {
      last = errno_text();
      continue;
    }
    const int flags = ::fcntl(s.fd(), F_GETFL);
    ::fcntl(s.fd(), F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(s.fd(), ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      pollfd pfd{s.fd(), POLLOUT, 0};
      rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
      if (rc == 1) {
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
        errno = err;
        rc = err == 0 ? 0 : -1;
      } else {
        errno = rc == 0 ? ETIMEDOUT : errno;
        rc = -1;
      }
    }
    if (rc == 0) {
      ::fcntl(s.fd(), F_SETFL, flags);
      return s;
    }
    last = errno_text();
  }
  raise(ErrorCode::kConnectFailed, peer.to_string() + ": " + last);
}

void set_nodelay(const Socket& socket, bool on) {
  int v = on ? 1 : 0;
  ::setsockopt(socket.fd(), IPPROTO_TCP, TCP_NODELAY, &v, sizeof(v));
}

bool read_exact(int fd, void* data, std::size_t size) {
  auto* p = static_cast<char*>(data);
  std::size_t got = 0;
  while (got < size) {
    const auto n = ::recv(fd, p + got, size - got, 0);
    if (n > 0) {
      got += static_cast<std::size_t>(n);
      continue;
    }
    if (n == 0) {
      if (got == 0) return false;
      raise(ErrorCode::kPeerClosed, "connection closed mid-message");
    }
    if (errno == EINTR) continue;
    raise(ErrorCode::kPeerClosed, "recv: " + errno_text());
  }
  return true;
}

void write_all(int fd, const void* data, std::size_t size) {
  const auto* p = static_cast<const char*>(data);
  std::size_t sent = 0;
  while (sent < size) {
    const auto n = ::send(fd, p + sent, size - sent, MSG_NOSIGNAL);
    if (n >= 0) {
      sent += static_cast<std::size_t>(n);
      continue;
    }
    if (errno == EINTR) continue;
    raise(ErrorCode::kPeerClosed, "send: " + errno_text());
  }
}

void put_u32(std::byte* out, std::uint32_t v) noexcept {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::byte>(v >> (8 * i));
}

void put_u64(std::byte* out, std::uint64_t v) noexcept {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::byte>(v >> (8 * i));
}

std::uint32_t get_u32(const std::byte* in) noexcept {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::byte* in) noexcept {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

void write_frame(int fd, std::span<const std::byte> payload) {
  std::byte header[4];
  put_u32(header, static_cast<std::uint32_t>(payload.size()));
  if (payload.size() <= 4096) {
    // One send for small frames keeps latency-mode messages in one segment.
    std::byte buf[4 + 4096];
    std::memcpy(buf, header, 4);
    if (!payload.empty()) std::memcpy(buf + 4, payload.data(), payload.size());
    write_all(fd, buf, 4 + payload.size());
    return;
  }
  write_all(fd, header, 4);
  write_all(fd, payload.data(), payload.size());
}

bool read_frame(int fd, std::vector<std::byte>& payload, std::uint32_t max_bytes) {
  std::byte header[4];
  if (!read_exact(fd, header, 4)) return false;
  const std::uint32_t n = get_u32(header);
  if (n > max_bytes) {
    raise(ErrorCode::kProtocol, "frame of " + std::to_string(n) + " bytes exceeds " + std::to_string(max_bytes));
  }
  payload.resize(n);
  if (n > 0 && !read_exact(fd, payload.data(), n)) {
    raise(ErrorCode::kPeerClosed, "connection closed after frame header");
  }
  return true;
}

TcpServer::TcpServer(const std::string& host, std::uint16_t port, Handler handler)
    : host_(host), handler_(std::move(handler)), listener_(listen_tcp(host, port)) {
  port_ = local_port(listener_);
  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::accept_loop() {
  while (!stopping_.load()) {
    const int fd = ::accept4(listener_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      if (stopping_.load()) break;
      if (errno == EMFILE || errno == ENFILE) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        continue;
      }
      break;
    }
    std::lock_guard lock(mu_);
    if (stopping_.load()) {
      ::close(fd);
      break;
    }
    reap(false);
    auto conn = std::make_unique<Connection>();
    conn->socket = Socket(fd);
    Connection* raw = conn.get();
    raw->thread = std::thread([this, raw] {
      try {
        handler_(raw->socket);
      } catch (const std::exception&) {
        // A broken client only ends its own connection.
      }
      // The fd stays open until reaped; the peer still needs its EOF now.
      ::shutdown(raw->socket.fd(), SHUT_RDWR);
      raw->done.store(true);
    });
    connections_.push_back(std::move(conn));
  }
}

void TcpServer::reap(bool all) {
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (all || (*it)->done.load()) {
      if ((*it)->thread.joinable()) (*it)->thread.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void TcpServer::stop() {
  std::lock_guard stop_lock(stop_mu_);
  if (stopped_) return;
  stopping_.store(true);
  ::shutdown(listener_.fd(), SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  {
    std::lock_guard lock(mu_);
    for (auto& c : connections_) ::shutdown(c->socket.fd(), SHUT_RDWR);
    reap(true);
  }
  listener_.close();
  stopped_ = true;
}

void TcpServer::wait() {
  while (!stopping_.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
}

}  // namespace bento::net
