// In-process TCP server speaking the vocoder wire protocol. Serves the echo
// backend for the CLI and scripted peers for tests.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "zerobas/wire.hpp"

namespace zerobas {

class VocoderServer {
 public:
  /// Maps a decoded request to the exact response bytes to send.
  using RawHandler = std::function<std::vector<std::uint8_t>(const wire::Request&)>;
  using Handler = std::function<wire::Response(const wire::Request&)>;

  /// Starts listening immediately; port 0 binds an ephemeral port.
  VocoderServer(RawHandler handler, const std::string& host = "127.0.0.1",
                std::uint16_t port = 0);
  ~VocoderServer();
  VocoderServer(const VocoderServer&) = delete;
  VocoderServer& operator=(const VocoderServer&) = delete;

  static RawHandler encoded(Handler handler);
  /// Returns the request's samples unchanged.
  static wire::Response echo(const wire::Request& req);

  std::uint16_t port() const { return port_; }
  /// Requests served so far, across all connections.
  std::size_t requests_served() const { return served_.load(); }
  void stop();

 private:
  void accept_loop();
  void serve_connection(int fd);

  RawHandler handler_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> served_{0};
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

}  // namespace zerobas
