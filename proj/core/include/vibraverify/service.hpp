// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "vibraverify/config.hpp"

namespace vibraverify {

/// Frames are a 4-byte big-endian payload length followed by the payload.
inline constexpr std::size_t kMaxFrameBytes = 64u << 20;

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload);

/// Blocking frame IO on a connected socket. read_frame throws kProtocol on
/// a short read or an oversized length, kIo on socket errors.
void write_frame(int fd, std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> read_frame(int fd);

/// One upload: wake message, WAV bytes, accelerometer CSV bytes. Returns
/// the verdict JSON, or {"error": "..."} when any part is malformed.
std::string handle_session(std::span<const std::uint8_t> wake, std::span<const std::uint8_t> wav,
                           std::span<const std::uint8_t> csv, const VerifyConfig& config);

/// TCP service answering one session per connection, each on its own thread.
class VerifyServer {
 public:
  explicit VerifyServer(VerifyConfig config, std::string host = "127.0.0.1", std::uint16_t port = 0);
  ~VerifyServer();
  VerifyServer(const VerifyServer&) = delete;
  VerifyServer& operator=(const VerifyServer&) = delete;

  /// Binds and starts accepting in the background. Throws kIo.
  void start();
  /// Stops accepting and waits for open sessions to finish.
  void stop();
  /// Bound port (useful when constructed with port 0).
  std::uint16_t port() const noexcept { return port_; }

 private:
  void accept_loop();
  void serve_connection(int fd) const;

  VerifyConfig config_;
  std::string host_;
  std::uint16_t port_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex sessions_mutex_;
  std::vector<std::thread> sessions_;
};

/// Client side of one session; returns the response payload as text.
std::string request_verdict(const std::string& host, std::uint16_t port,
                            std::span<const std::uint8_t> wake, std::span<const std::uint8_t> wav,
                            std::span<const std::uint8_t> csv);

}  // namespace vibraverify
