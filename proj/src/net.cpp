#include "net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "zerobas/errors.hpp"

namespace zerobas::net {
namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void fail(VocoderError::Kind kind, const std::string& what) {
  throw VocoderError(kind, what);
}

std::string errno_text(int err) { return std::strerror(err); }

/// Waits for `events` until `deadline`; throws kTimeout on expiry.
void wait_for(int fd, short events, Clock::time_point deadline) {
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) fail(VocoderError::Kind::kTimeout, "vocoder endpoint timed out");
    pollfd p{fd, events, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
    if (rc > 0) return;
    if (rc == 0) fail(VocoderError::Kind::kTimeout, "vocoder endpoint timed out");
    if (errno != EINTR) fail(VocoderError::Kind::kTransport, "poll: " + errno_text(errno));
  }
}

}  // namespace

int connect_tcp(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0)
    fail(VocoderError::Kind::kTransport, "cannot resolve " + host + ": " + ::gai_strerror(rc));

  const auto deadline = Clock::now() + timeout;
  int last_errno = ECONNREFUSED;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    const int flags = ::fcntl(fd, F_GETFL);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      try {
        wait_for(fd, POLLOUT, deadline);
      } catch (...) {
        ::close(fd);
        ::freeaddrinfo(res);
        throw;
      }
      int err = 0;
      socklen_t len = sizeof err;
      ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
      rc = err == 0 ? 0 : -1;
      errno = err;
    }
    if (rc == 0) {
      ::freeaddrinfo(res);
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return fd;
    }
    last_errno = errno;
    ::close(fd);
  }
  ::freeaddrinfo(res);
  const std::string where = host + ":" + service;
  if (last_errno == ECONNREFUSED)
    fail(VocoderError::Kind::kConnectionRefused, "connection refused by " + where);
  if (last_errno == ETIMEDOUT) fail(VocoderError::Kind::kTimeout, "connect to " + where + " timed out");
  fail(VocoderError::Kind::kTransport, "connect to " + where + ": " + errno_text(last_errno));
}

void send_all(int fd, std::span<const std::uint8_t> data, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n > 0) {
      sent += static_cast<std::size_t>(n);
    } else if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      wait_for(fd, POLLOUT, deadline);
    } else if (n < 0 && errno == EINTR) {
      continue;
    } else {
      fail(VocoderError::Kind::kTransport, "send: " + errno_text(errno));
    }
  }
}

void recv_exact(int fd, std::span<std::uint8_t> data, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::size_t got = 0;
  while (got < data.size()) {
    const ssize_t n = ::recv(fd, data.data() + got, data.size() - got, 0);
    if (n > 0) {
      got += static_cast<std::size_t>(n);
    } else if (n == 0) {
      fail(VocoderError::Kind::kMalformedResponse, "peer closed the connection mid-frame");
    } else if (errno == EAGAIN || errno == EWOULDBLOCK) {
      wait_for(fd, POLLIN, deadline);
    } else if (errno != EINTR) {
      fail(VocoderError::Kind::kTransport, "recv: " + errno_text(errno));
    }
  }
}

int listen_tcp(const std::string& host, std::uint16_t port, std::uint16_t& bound_port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw IoError("socket: " + errno_text(errno));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw InvalidInput("listen address must be a dotted IPv4 address: " + host);
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd, 16) != 0) {
    const int err = errno;
    ::close(fd);
    throw IoError("bind/listen on " + host + ":" + std::to_string(port) + ": " + errno_text(err));
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  bound_port = ntohs(addr.sin_port);
  return fd;
}

void close_fd(int fd) {
  if (fd >= 0) ::close(fd);
}

}  // namespace zerobas::net
