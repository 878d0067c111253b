#include "zerobas/vocoder_server.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>

#include "net.hpp"
#include "zerobas/errors.hpp"

namespace zerobas {
namespace {

constexpr auto kPollInterval = std::chrono::milliseconds(50);
constexpr auto kFrameTimeout = std::chrono::milliseconds(30000);

bool readable(int fd) {
  pollfd p{fd, POLLIN, 0};
  return ::poll(&p, 1, static_cast<int>(kPollInterval.count())) > 0;
}

}  // namespace

VocoderServer::VocoderServer(RawHandler handler, const std::string& host, std::uint16_t port)
    : handler_(std::move(handler)) {
  listen_fd_ = net::listen_tcp(host, port, port_);
  acceptor_ = std::thread([this] { accept_loop(); });
}

VocoderServer::~VocoderServer() { stop(); }

VocoderServer::RawHandler VocoderServer::encoded(Handler handler) {
  return [h = std::move(handler)](const wire::Request& req) {
    return wire::encode_response(h(req));
  };
}

wire::Response VocoderServer::echo(const wire::Request& req) {
  wire::Response resp;
  resp.samples = req.samples;
  return resp;
}

void VocoderServer::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (auto& t : workers)
    if (t.joinable()) t.join();
  net::close_fd(listen_fd_);
  listen_fd_ = -1;
}

void VocoderServer::accept_loop() {
  while (!stopping_.load()) {
    if (!readable(listen_fd_)) continue;
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC | SOCK_NONBLOCK);
    if (fd < 0) continue;
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void VocoderServer::serve_connection(int fd) {
  const wire::ReadExact read = [fd](std::span<std::uint8_t> dst) {
    net::recv_exact(fd, dst, kFrameTimeout);
  };
  while (!stopping_.load()) {
    if (!readable(fd)) continue;
    std::uint8_t probe = 0;
    const ssize_t peeked = ::recv(fd, &probe, 1, MSG_PEEK);
    if (peeked == 0) break;  // orderly close between frames
    if (peeked < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      break;
    }
    try {
      const wire::Request req = wire::read_request(read);
      const auto bytes = handler_(req);
      ++served_;
      net::send_all(fd, bytes, kFrameTimeout);
    } catch (const std::exception&) {
      break;
    }
  }
  net::close_fd(fd);
}

}  // namespace zerobas
