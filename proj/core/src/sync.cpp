// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/sync.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "vibraverify/error.hpp"

namespace vibraverify {

std::string format_wake_message(const WakeMessage& message) {
  nlohmann::ordered_json j;
  j["type"] = "wake";
  j["session_id"] = message.session_id;
  j["va_clock_ms"] = message.va_clock_ms;
  return j.dump() + "\n";
}

WakeMessage parse_wake_message(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (line.find('\n') != std::string_view::npos) {
    throw Error(ErrorCode::kProtocol, "wake message spans more than one line");
  }
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kProtocol, "wake message is not a JSON object");
  }
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string() || type->get<std::string>() != "wake") {
    throw Error(ErrorCode::kProtocol, "wake message needs \"type\":\"wake\"");
  }
  const auto id = j.find("session_id");
  if (id == j.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw Error(ErrorCode::kProtocol, "wake message needs a session_id string");
  }
  const auto clock = j.find("va_clock_ms");
  if (clock == j.end() || !clock->is_number_integer()) {
    throw Error(ErrorCode::kProtocol, "wake message needs an integer va_clock_ms");
  }
  return {id->get<std::string>(), clock->get<std::int64_t>()};
}

std::string make_session_id(Rng& rng) {
  std::array<std::uint8_t, 16> b{};
  for (std::size_t i = 0; i < b.size(); i += 8) {
    const std::uint64_t v = rng.next();
    for (std::size_t k = 0; k < 8; ++k) b[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
  }
  b[6] = static_cast<std::uint8_t>((b[6] & 0x0F) | 0x40);
  b[8] = static_cast<std::uint8_t>((b[8] & 0x3F) | 0x80);
  std::string out;
  char hex[3];
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i == 4 || i == 6 || i == 8 || i == 10) out.push_back('-');
    std::snprintf(hex, sizeof(hex), "%02x", b[i]);
    out.append(hex);
  }
  return out;
}

double sample_trigger_lag_s(Rng& rng, double max_lag_s) {
  if (max_lag_s < 0.0) throw Error(ErrorCode::kInvalidArgument, "max_lag_s must be non-negative");
  return rng.uniform(-max_lag_s, max_lag_s);
}

SyncPair make_sync_pair(Signal mic, Signal accel, double lag_s, double max_lag_s) {
  if (!std::isfinite(lag_s) || std::abs(lag_s) > max_lag_s) {
    throw Error(ErrorCode::kInvalidArgument,
                "lag " + std::to_string(lag_s) + " s exceeds the " + std::to_string(max_lag_s) +
                    " s bound");
  }
  return {std::move(mic), std::move(accel), lag_s};
}

WakeTrigger simulate_wake_trigger(std::uint64_t seed, double max_lag_s, std::int64_t va_clock_ms) {
  Rng rng(seed);
  WakeTrigger trigger;
  trigger.wake.session_id = make_session_id(rng);
  trigger.wake.va_clock_ms = va_clock_ms;
  trigger.lag_s = sample_trigger_lag_s(rng, max_lag_s);
  return trigger;
}

Signal offset_stream_start(const Signal& accel, double lag_s) {
  const auto n = static_cast<long>(accel.size());
  if (n == 0) return accel;
  const auto shift = std::lround(lag_s * accel.sample_rate_hz());
  std::vector<double> out(accel.size());
  for (long i = 0; i < n; ++i) {
    const long src = std::clamp(i + shift, 0L, n - 1);
    out[static_cast<std::size_t>(i)] = accel[static_cast<std::size_t>(src)];
  }
  return Signal(std::move(out), accel.sample_rate_hz());
}

SyncPair apply_wake_trigger(const Signal& mic, const Signal& accel, const WakeTrigger& trigger,
                            double max_lag_s) {
  return make_sync_pair(mic, offset_stream_start(accel, trigger.lag_s), trigger.lag_s, max_lag_s);
}

}  // namespace vibraverify
