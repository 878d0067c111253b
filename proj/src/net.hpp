// Minimal blocking TCP helpers with poll-based deadlines.
#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>

namespace zerobas::net {

/// Connects to host:port within `timeout`. Throws VocoderError
/// (kConnectionRefused, kTimeout or kTransport).
int connect_tcp(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout);

/// Throws VocoderError kTimeout or kTransport.
void send_all(int fd, std::span<const std::uint8_t> data, std::chrono::milliseconds timeout);

/// Throws VocoderError kTimeout, kTransport, or kMalformedResponse when the
/// peer closes mid-frame.
void recv_exact(int fd, std::span<std::uint8_t> data, std::chrono::milliseconds timeout);

/// Listening socket bound to host:port (port 0 picks one). Returns the fd and
/// writes the bound port.
int listen_tcp(const std::string& host, std::uint16_t port, std::uint16_t& bound_port);

void close_fd(int fd);

}  // namespace zerobas::net
