// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "vibraverify/random.hpp"
#include "vibraverify/signal.hpp"

namespace vibraverify {

/// Trigger sent by the voice assistant when it hears the wake word. Wire
/// form is one line of JSON terminated by '\n':
///   {"type":"wake","session_id":"<uuid>","va_clock_ms":<int>}
struct WakeMessage {
  std::string session_id;
  std::int64_t va_clock_ms = 0;

  friend bool operator==(const WakeMessage&, const WakeMessage&) = default;
};

std::string format_wake_message(const WakeMessage& message);

/// Accepts one optional trailing newline. Throws kProtocol on anything else
/// that is not a well-formed wake message.
WakeMessage parse_wake_message(std::string_view line);

/// Random (version 4) UUID in canonical lower-case form.
std::string make_session_id(Rng& rng);

/// Uniform trigger offset in [-max_lag_s, +max_lag_s].
double sample_trigger_lag_s(Rng& rng, double max_lag_s = 0.040);

/// Coarsely synchronised channel pair. lag_s is the accelerometer stream
/// start minus the microphone stream start.
struct SyncPair {
  Signal mic;
  Signal accel;
  double lag_s = 0.0;
};

/// Throws kInvalidArgument when |lag_s| > max_lag_s.
SyncPair make_sync_pair(Signal mic, Signal accel, double lag_s, double max_lag_s = 0.5);

struct WakeTrigger {
  WakeMessage wake;
  double lag_s = 0.0;  // ground truth, accel start minus mic start
};

/// Emits a wake message and draws the trigger lag. Deterministic in seed.
WakeTrigger simulate_wake_trigger(std::uint64_t seed, double max_lag_s = 0.040,
                                  std::int64_t va_clock_ms = 0);

/// The accelerometer stream as it would be recorded had it started lag_s
/// later than the microphone: content moves earlier by lag_s (later when
/// negative). Length is kept; vacated samples repeat the edge value.
Signal offset_stream_start(const Signal& accel, double lag_s);

/// Applies a trigger to a pair of streams that started together.
SyncPair apply_wake_trigger(const Signal& mic, const Signal& accel, const WakeTrigger& trigger,
                            double max_lag_s = 0.5);

}  // namespace vibraverify
