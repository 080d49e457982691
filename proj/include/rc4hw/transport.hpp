// Copyright 2026 The rc4hw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rc4hw/hw_model.hpp"
#include "rc4hw/rc4.hpp"

// One encrypting sender talks to one decrypting receiver over a reliable
// byte stream. Wire format: a 5-octet handshake each way (magic "RC4S"
// then version 1), then frames of a 4-octet big-endian payload length
// followed by that many ciphertext octets. Length 0 ends the stream.
// Sessions are unidirectional; the keystream position advances
// monotonically across frames, one key schedule per session.

namespace rc4hw {

inline constexpr std::array<std::uint8_t, 5> kHandshakeBytes = {0x52, 0x43,
                                                                0x34, 0x53,
                                                                0x01};
inline constexpr std::size_t kMaxFramePayload = 65536;

/// I/O failure on the underlying stream; bytes_done payload octets had
/// been transferred when it happened.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, std::uint64_t bytes_done)
      : std::runtime_error(what), bytes_done(bytes_done) {}
  std::uint64_t bytes_done = 0;
};

/// The peer closed the connection mid-stream; bytes_done octets were
/// recovered before the cut.
class TruncationError : public TransportError {
 public:
  using TransportError::TransportError;
};

/// The peer violated the wire format (bad magic, oversized frame).
class WireProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedVersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Role : std::uint8_t { Sender, Receiver };
enum class Engine : std::uint8_t { Reference, HardwareModel };

struct SessionConfig {
  Role role = Role::Sender;
  Rc4Key key;
  Engine engine = Engine::Reference;
};

/// The keystream source behind a session: either the reference cipher or
/// the cycle-accurate engine. Both produce identical bytes; the key
/// schedule runs once, at construction.
class KeystreamEngine {
 public:
  KeystreamEngine(const Rc4Key& key, Engine kind) : kind_(kind) {
    if (kind_ == Engine::Reference) {
      ref_ = ksa(key);
    } else {
      hw_.emplace(key);
      hw_->run_ksa();
    }
  }

  void apply(std::span<std::uint8_t> data) {
    if (kind_ == Engine::Reference) {
      for (auto& b : data) b ^= prga_next(ref_);
    } else {
      for (auto& b : data) b ^= hw_->next_byte();
    }
  }

 private:
  Engine kind_;
  Rc4State ref_{};
  std::optional<Rc4Hardware> hw_;
};

/// A connected stream socket (TCP or socketpair), owning its fd.
class FdStream {
 public:
  explicit FdStream(int fd) : fd_(fd) {}
  FdStream(FdStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  FdStream& operator=(FdStream&& other) noexcept {
    if (this != &other) {
      close_fd();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  FdStream(const FdStream&) = delete;
  FdStream& operator=(const FdStream&) = delete;
  ~FdStream() { close_fd(); }

  /// Read up to n bytes; 0 means the peer closed.
  std::size_t read_some(void* buf, std::size_t n) {
    for (;;) {
      const ssize_t got = ::recv(fd_, buf, n, 0);
      if (got >= 0) return static_cast<std::size_t>(got);
      if (errno == EINTR) continue;
      throw TransportError(std::string("recv: ") + std::strerror(errno), 0);
    }
  }

  /// Read exactly n bytes or as many as the stream still has; returns
  /// the count actually read (< n only on end of stream).
  std::size_t read_full(void* buf, std::size_t n) {
    std::size_t done = 0;
    auto* p = static_cast<std::uint8_t*>(buf);
    while (done < n) {
      const std::size_t got = read_some(p + done, n - done);
      if (got == 0) break;
      done += got;
    }
    return done;
  }

  void write_all(const void* buf, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(buf);
    std::size_t done = 0;
    while (done < n) {
      const ssize_t put = ::send(fd_, p + done, n - done, MSG_NOSIGNAL);
      if (put < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("send: ") + std::strerror(errno), 0);
      }
      done += static_cast<std::size_t>(put);
    }
  }

  void shutdown_write() { ::shutdown(fd_, SHUT_WR); }
  int fd() const { return fd_; }

 private:
  void close_fd() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  int fd_ = -1;
};

/// A connected pair of local stream sockets (loopback for tests).
inline std::pair<FdStream, FdStream> stream_pipe() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw TransportError(std::string("socketpair: ") + std::strerror(errno), 0);
  }
  return {FdStream(fds[0]), FdStream(fds[1])};
}

namespace detail {

inline std::pair<std::string, std::string> split_host_port(
    const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon + 1 == addr.size()) {
    throw std::invalid_argument("address must be host:port");
  }
  std::string host = addr.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  return {host, addr.substr(colon + 1)};
}

}  // namespace detail

inline FdStream tcp_connect(const std::string& addr) {
  const auto [host, port] = detail::split_host_port(addr);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0) {
    throw TransportError("cannot resolve " + addr, 0);
  }
  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw TransportError("cannot connect to " + addr, 0);
  return FdStream(fd);
}

class TcpListener {
 public:
  explicit TcpListener(const std::string& addr) {
    const auto [host, port] = detail::split_host_port(addr);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.empty() ? nullptr : host.c_str(), port.c_str(),
                      &hints, &res) != 0) {
      throw TransportError("cannot resolve " + addr, 0);
    }
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd_ < 0) continue;
      const int one = 1;
      ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
      if (::bind(fd_, ai->ai_addr, ai->ai_addrlen) == 0 &&
          ::listen(fd_, 1) == 0) {
        break;
      }
      ::close(fd_);
      fd_ = -1;
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) throw TransportError("cannot listen on " + addr, 0);
  }

  ~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
  }
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t local_port() const {
    sockaddr_storage ss{};
    socklen_t len = sizeof ss;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len) != 0) {
      throw TransportError("getsockname failed", 0);
    }
    if (ss.ss_family == AF_INET) {
      return ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
    }
    return ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port);
  }

  FdStream accept_one() {
    for (;;) {
      const int fd = ::accept(fd_, nullptr, nullptr);
      if (fd >= 0) return FdStream(fd);
      if (errno == EINTR) continue;
      throw TransportError(std::string("accept: ") + std::strerror(errno), 0);
    }
  }

 private:
  int fd_ = -1;
};

/// A live, handshaken session over a byte stream.
template <class Stream>
class Session {
 public:
  Session(Stream& stream, SessionConfig config)
      : stream_(stream),
        config_(std::move(config)),
        engine_(config_.key, config_.engine) {}

  Stream& stream() { return stream_; }
  const SessionConfig& config() const { return config_; }
  KeystreamEngine& engine() { return engine_; }

  std::uint64_t bytes_transferred = 0;

 private:
  Stream& stream_;
  SessionConfig config_;
  KeystreamEngine engine_;
};

/// Exchange and validate the 5-octet hello in both directions, then key
/// the cipher. The sender speaks first; the receiver echoes the exact
/// bytes. No key schedule runs on a failed handshake.
template <class Stream>
Session<Stream> handshake(Stream& stream, const SessionConfig& config) {
  std::array<std::uint8_t, 5> peer{};
  if (config.role == Role::Sender) {
    stream.write_all(kHandshakeBytes.data(), kHandshakeBytes.size());
    if (stream.read_full(peer.data(), peer.size()) != peer.size()) {
      throw TransportError("connection closed during handshake", 0);
    }
  } else {
    if (stream.read_full(peer.data(), peer.size()) != peer.size()) {
      throw TransportError("connection closed during handshake", 0);
    }
  }
  if (!std::equal(peer.begin(), peer.begin() + 4, kHandshakeBytes.begin())) {
    throw WireProtocolError("handshake magic mismatch");
  }
  if (peer[4] != kHandshakeBytes[4]) {
    throw UnsupportedVersionError("unsupported protocol version " +
                                  std::to_string(peer[4]));
  }
  if (config.role == Role::Receiver) {
    stream.write_all(peer.data(), peer.size());
  }
  return Session<Stream>(stream, config);
}

namespace detail {

template <class Stream>
void write_frame_header(Stream& stream, std::uint32_t len) {
  const std::uint8_t hdr[4] = {static_cast<std::uint8_t>(len >> 24),
                               static_cast<std::uint8_t>(len >> 16),
                               static_cast<std::uint8_t>(len >> 8),
                               static_cast<std::uint8_t>(len)};
  stream.write_all(hdr, sizeof hdr);
}

}  // namespace detail

/// Encrypt and send everything from src in frames of at most 64 KiB,
/// then the end-of-stream marker. Returns payload octets sent.
template <class Stream>
std::uint64_t send_stream(Session<Stream>& session, std::istream& src) {
  if (session.config().role != Role::Sender) {
    throw std::logic_error("send_stream needs the Sender role");
  }
  std::vector<std::uint8_t> buf(kMaxFramePayload);
  try {
    for (;;) {
      src.read(reinterpret_cast<char*>(buf.data()),
               static_cast<std::streamsize>(buf.size()));
      const std::size_t got = static_cast<std::size_t>(src.gcount());
      if (got == 0) break;
      session.engine().apply({buf.data(), got});
      detail::write_frame_header(session.stream(),
                                 static_cast<std::uint32_t>(got));
      session.stream().write_all(buf.data(), got);
      session.bytes_transferred += got;
      if (src.eof()) break;
    }
    detail::write_frame_header(session.stream(), 0);
  } catch (TransportError& err) {
    throw TransportError(err.what(), session.bytes_transferred);
  }
  return session.bytes_transferred;
}

/// Receive frames, decrypt, and write to sink until the end marker.
/// Returns payload octets received; output equals the sender's input.
template <class Stream>
std::uint64_t recv_stream(Session<Stream>& session, std::ostream& sink) {
  if (session.config().role != Role::Receiver) {
    throw std::logic_error("recv_stream needs the Receiver role");
  }
  std::vector<std::uint8_t> buf;
  for (;;) {
    std::uint8_t hdr[4];
    std::size_t got;
    try {
      got = session.stream().read_full(hdr, sizeof hdr);
    } catch (TransportError& err) {
      throw TransportError(err.what(), session.bytes_transferred);
    }
    if (got != sizeof hdr) {
      throw TruncationError("connection closed before end of stream",
                            session.bytes_transferred);
    }
    const std::uint32_t len = static_cast<std::uint32_t>(hdr[0]) << 24 |
                              static_cast<std::uint32_t>(hdr[1]) << 16 |
                              static_cast<std::uint32_t>(hdr[2]) << 8 |
                              static_cast<std::uint32_t>(hdr[3]);
    if (len == 0) break;
    if (len > kMaxFramePayload) {
      throw WireProtocolError("frame length " + std::to_string(len) +
                              " exceeds the 65536 limit");
    }
    buf.resize(len);
    try {
      got = session.stream().read_full(buf.data(), len);
    } catch (TransportError& err) {
      throw TransportError(err.what(), session.bytes_transferred);
    }
    if (got != len) {
      throw TruncationError("connection closed mid-frame",
                            session.bytes_transferred);
    }
    session.engine().apply({buf.data(), len});
    sink.write(reinterpret_cast<const char*>(buf.data()),
               static_cast<std::streamsize>(len));
    if (!sink) {
      throw TransportError("sink write failed", session.bytes_transferred);
    }
    session.bytes_transferred += len;
  }
  return session.bytes_transferred;
}

}  // namespace rc4hw
