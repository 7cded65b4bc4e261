// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/service.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string_view>

#include "json.hpp"
#include "vibraverify/accel.hpp"
#include "vibraverify/audio_io.hpp"
#include "vibraverify/error.hpp"
#include "vibraverify/pipeline.hpp"
#include "vibraverify/sync.hpp"

namespace vibraverify {
namespace {

std::string errno_text() { return std::strerror(errno); }

void send_all(int fd, const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, "send failed: " + errno_text());
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

void recv_all(int fd, std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::recv(fd, data, size, 0);
    if (n == 0) throw Error(ErrorCode::kProtocol, "connection closed mid-frame");
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, "recv failed: " + errno_text());
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

class Socket {
 public:
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  int get() const noexcept { return fd_; }

 private:
  int fd_;
};

std::string error_payload(const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  return j.dump();
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Half-closes and discards whatever the peer still sends, so closing does not
// reset the connection before the peer has read our reply.
void drain_and_close(int fd) {
  ::shutdown(fd, SHUT_WR);
  timeval timeout{1, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof(timeout));
  std::uint8_t sink[4096];
  while (::recv(fd, sink, sizeof(sink), 0) > 0) {
  }
}

}  // namespace

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxFrameBytes) throw Error(ErrorCode::kProtocol, "frame too large");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::vector<std::uint8_t> out(4 + payload.size());
  out[0] = static_cast<std::uint8_t>(n >> 24);
  out[1] = static_cast<std::uint8_t>(n >> 16);
  out[2] = static_cast<std::uint8_t>(n >> 8);
  out[3] = static_cast<std::uint8_t>(n);
  if (!payload.empty()) std::memcpy(out.data() + 4, payload.data(), payload.size());
  return out;
}

void write_frame(int fd, std::span<const std::uint8_t> payload) {
  const auto frame = encode_frame(payload);
  send_all(fd, frame.data(), frame.size());
}

std::vector<std::uint8_t> read_frame(int fd) {
  std::uint8_t header[4];
  recv_all(fd, header, sizeof(header));
  const std::uint32_t n = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                          (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
  if (n > kMaxFrameBytes) {
    throw Error(ErrorCode::kProtocol, "frame of " + std::to_string(n) + " bytes exceeds the limit");
  }
  std::vector<std::uint8_t> payload(n);
  recv_all(fd, payload.data(), payload.size());
  return payload;
}

std::string handle_session(std::span<const std::uint8_t> wake, std::span<const std::uint8_t> wav,
                           std::span<const std::uint8_t> csv, const VerifyConfig& config) {
  try {
    parse_wake_message(std::string_view(reinterpret_cast<const char*>(wake.data()), wake.size()));
    const Signal mic = decode_wav(wav);
    const AccelTrace accel =
        parse_accel_csv(std::string_view(reinterpret_cast<const char*>(csv.data()), csv.size()));
    return verdict_json(verify(mic, accel, config), config_hash(config));
  } catch (const std::exception& e) {
    return error_payload(e.what());
  }
}

VerifyServer::VerifyServer(VerifyConfig config, std::string host, std::uint16_t port)
    : config_(std::move(config)), host_(std::move(host)), port_(port) {
  config_.validate();
}

VerifyServer::~VerifyServer() { stop(); }

void VerifyServer::start() {
  if (running_) return;
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port_);
  if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad IPv4 address '" + host_ + "'");
  }
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error(ErrorCode::kIo, "socket failed: " + errno_text());
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd, 64) != 0) {
    const std::string why = errno_text();
    ::close(fd);
    throw Error(ErrorCode::kIo, "cannot listen on " + host_ + ":" + std::to_string(port_) + ": " + why);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  listen_fd_ = fd;
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void VerifyServer::stop() {
  if (!running_.exchange(false)) return;
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
  std::lock_guard lock(sessions_mutex_);
  for (auto& t : sessions_) t.join();
  sessions_.clear();
}

void VerifyServer::accept_loop() {
  while (running_) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, 100);
    if (ready <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    timeval timeout{30, 0};
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof(timeout));
    std::lock_guard lock(sessions_mutex_);
    sessions_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void VerifyServer::serve_connection(int raw_fd) const {
  const Socket socket(raw_fd);
  std::string response;
  try {
    const auto wake = read_frame(socket.get());
    try {
      parse_wake_message(std::string_view(reinterpret_cast<const char*>(wake.data()), wake.size()));
    } catch (const Error& e) {
      write_frame(socket.get(), as_bytes(error_payload(e.what())));
      drain_and_close(socket.get());
      return;
    }
    const auto wav = read_frame(socket.get());
    const auto csv = read_frame(socket.get());
    response = handle_session(wake, wav, csv, config_);
  } catch (const std::exception& e) {
    response = error_payload(e.what());
  }
  try {
    write_frame(socket.get(), as_bytes(response));
  } catch (const Error&) {
    // peer went away; nothing left to tell it
  }
}

std::string request_verdict(const std::string& host, std::uint16_t port,
                            std::span<const std::uint8_t> wake, std::span<const std::uint8_t> wav,
                            std::span<const std::uint8_t> csv) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result); rc != 0) {
    throw Error(ErrorCode::kIo, "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  const Socket socket(::socket(result->ai_family, result->ai_socktype, result->ai_protocol));
  const int rc = socket.get() < 0 ? -1 : ::connect(socket.get(), result->ai_addr, result->ai_addrlen);
  ::freeaddrinfo(result);
  if (rc != 0) throw Error(ErrorCode::kIo, "cannot connect to " + host + ":" + service + ": " + errno_text());
  write_frame(socket.get(), wake);
  // the server may answer early with an error frame after a bad wake message
  try {
    write_frame(socket.get(), wav);
    write_frame(socket.get(), csv);
  } catch (const Error&) {
  }
  const auto reply = read_frame(socket.get());
  return std::string(reply.begin(), reply.end());
}

}  // namespace vibraverify
