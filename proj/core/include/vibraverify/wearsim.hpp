// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "vibraverify/signal.hpp"

namespace vibraverify {

/// Wearable accelerometer response to airborne sound.
///
/// The sensor has no anti-alias filter: sound inside [band_low_hz,
/// band_high_hz] is scaled by distance, gated by the sensitivity floor and
/// point-sampled at f_ws_hz, so it folds into [0, f_ws_hz / 2].
struct AccelModel {
  double f_ws_hz = 200.0;
  double band_low_hz = 700.0;
  double band_high_hz = 3300.0;
  int band_order = 8;
  /// Sine-equivalent amplitude (dBFS) below which sound leaves no response.
  double sensitivity_floor_db = -40.0;
  double distance_m = 0.10;
  double reference_distance_m = 0.05;
  /// Sources farther than this leave nothing above the noise floor.
  double cutoff_distance_m = 0.25;
  /// m/s^2 per unit of full-scale audio at the reference distance.
  double response_gain = 2.0;
  double hand_noise_rms = 0.05;    // m/s^2, below hand_noise_max_hz
  double hand_noise_max_hz = 10.0;
  double sensor_noise_rms = 0.003;  // m/s^2, broadband
  double gravity = 9.81;
  /// Timestamp jitter as a fraction of the sample period (uniform, +/- half).
  double timestamp_jitter = 0.0;
  double gate_frame_s = 0.02;

  /// (reference / distance)^2 with distances below the reference clipped,
  /// and 0 beyond the cutoff distance.
  double distance_gain() const;
  void validate() const;
};

/// Throws kRateTooLow when the audio rate is below 2 * band_high_hz.
/// Deterministic in (audio, model, seed).
AccelTrace simulate_accel(const Signal& audio, const AccelModel& model, std::uint64_t seed);

/// simulate_accel on the audio delayed by lag_s (advanced when negative),
/// zero-filled so the trace keeps the audio's duration.
AccelTrace simulate_accel_delayed(const Signal& audio, const AccelModel& model, double lag_s,
                                  std::uint64_t seed);

/// Shifts a signal later by delay_s seconds (earlier when negative), keeping its length.
Signal delay_signal(const Signal& signal, double delay_s);

/// White Gaussian noise at the given RMS level in dBFS.
Signal ambient_noise(double duration_s, double sample_rate_hz, double level_db, std::uint64_t seed);

inline constexpr int kCorpusWords = 20;

/// Synthetic command phrase: four to six syllables of gliding formant-like tones
/// inside 750..3250 Hz with 0.5 s of silence on either side. The trajectory
/// is fixed by word_id; the seed only perturbs gain, timing and pitch by
/// small amounts. Throws kUnknownWordId outside [0, kCorpusWords).
Signal synth_utterance(int word_id, std::uint64_t seed, double sample_rate_hz = 8000.0);

enum class AttackKind { kNormal, kRandomAttack, kReplay, kHiddenCommand, kUltrasound };
enum class TrialLabel { kLegit, kAttack };

std::string_view to_string(AttackKind kind);
AttackKind attack_kind_from_string(std::string_view name);
std::string_view to_string(TrialLabel label);
TrialLabel trial_label_from_string(std::string_view name);

/// What the absent user's wearable hears during a remote attack.
enum class AbsentSource { kAmbient, kOtherUtterance };

struct AttackSpec {
  AttackKind kind = AttackKind::kNormal;
  AccelModel model;
  /// Wake-trigger offset of the accelerometer stream; sampled from
  /// U[-max_lag_s, +max_lag_s] when unset.
  std::optional<double> lag_s;
  double max_lag_s = 0.040;
  double mic_ambient_db = -60.0;
  /// random_attack / replay: source of the wearable's recording.
  std::optional<AbsentSource> absent_source;
  /// Word spoken by the attacker (random_attack) or by the absent user;
  /// derived from the seed when unset.
  std::optional<int> other_word_id;
  /// hidden_command: RMS level of the masking noise and speaker distance to
  /// the wearable.
  double hidden_noise_db = -14.0;
  double speaker_distance_m = 0.30;
  /// ultrasound: linear chirp parameters.
  double ultrasound_low_hz = 15000.0;
  double ultrasound_high_hz = 25000.0;
  double ultrasound_rate_hz = 64000.0;
  double ultrasound_db = -6.0;

  AbsentSource effective_absent_source() const;
  void validate() const;
};

struct Trial {
  Signal mic;
  AccelTrace accel;
  TrialLabel label = TrialLabel::kLegit;
  AttackKind kind = AttackKind::kNormal;
  double lag_s = 0.0;
};

/// Builds the microphone audio and wearable trace for one scenario.
///   normal        : legit audio at both devices.
///   random_attack : another word at the VA; the absent wearable records a
///                   different utterance or ambient noise.
///   replay        : legit audio replayed at the VA; absent wearable as above.
///   hidden_command: legit audio buried in broadband noise, played from a
///                   speaker speaker_distance_m from the wearable.
///   ultrasound    : 15-25 kHz chirp at both devices.
Trial generate_attack(const AttackSpec& spec, const Signal& legit_audio, std::uint64_t seed);

}  // namespace vibraverify
