// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/wearsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "vibraverify/convert.hpp"
#include "vibraverify/error.hpp"
#include "vibraverify/filter.hpp"
#include "vibraverify/random.hpp"

namespace vibraverify {
namespace {

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

std::array<double, 3> random_unit_vector(Rng& rng) {
  std::array<double, 3> v{};
  double norm = 0.0;
  while (norm < 1e-6) {
    for (double& c : v) c = rng.normal();
    norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  }
  for (double& c : v) c /= norm;
  return v;
}

// Per-sample gain that is 1 where the surrounding frame is loud enough to
// excite the sensor and 0 otherwise, interpolated between frame centres.
std::vector<double> sensitivity_gate(const std::vector<double>& y, double fs, double frame_s,
                                     double floor_db) {
  const std::size_t n = y.size();
  const auto frame = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(frame_s * fs)));
  const std::size_t frames = (n + frame - 1) / frame;
  const double floor_amp = db_to_amplitude(floor_db);
  std::vector<double> open(frames, 0.0);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t b = f * frame;
    const std::size_t e = std::min(n, b + frame);
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += y[i] * y[i];
    const double rms = std::sqrt(acc / static_cast<double>(e - b));
    open[f] = rms * std::numbers::sqrt2 >= floor_amp ? 1.0 : 0.0;
  }
  std::vector<double> gain(n, 0.0);
  const double half = static_cast<double>(frame) / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = (static_cast<double>(i) + 0.5 - half) / static_cast<double>(frame);
    if (pos <= 0.0) {
      gain[i] = open.front();
    } else if (pos >= static_cast<double>(frames - 1)) {
      gain[i] = open.back();
    } else {
      const auto lo = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(lo);
      gain[i] = open[lo] + frac * (open[lo + 1] - open[lo]);
    }
  }
  return gain;
}

std::vector<double> hand_noise(Rng& rng, std::size_t n, const AccelModel& model) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  if (model.hand_noise_rms <= 0.0 || n < 2) {
    std::fill(v.begin(), v.end(), 0.0);
    return v;
  }
  if (model.hand_noise_max_hz < model.f_ws_hz / 2.0) {
    v = filtfilt(design_butterworth(FilterKind::kLowpass, 4, model.hand_noise_max_hz, model.f_ws_hz), v);
  }
  double acc = 0.0;
  for (double x : v) acc += x * x;
  const double rms = std::sqrt(acc / static_cast<double>(n));
  if (rms > 0.0) {
    for (double& x : v) x *= model.hand_noise_rms / rms;
  }
  return v;
}

Signal mix(const Signal& a, const Signal& b) {
  std::vector<double> out(a.samples().begin(), a.samples().end());
  const auto bs = b.samples();
  for (std::size_t i = 0; i < std::min(out.size(), bs.size()); ++i) out[i] += bs[i];
  return Signal(std::move(out), a.sample_rate_hz());
}

Signal scaled(const Signal& s, double gain) {
  std::vector<double> out(s.samples().begin(), s.samples().end());
  for (double& v : out) v *= gain;
  return Signal(std::move(out), s.sample_rate_hz());
}

// Raised-cosine edges of edge_s seconds on [begin_s, end_s), zero elsewhere.
double tapered_window(double t, double begin_s, double end_s, double edge_s) {
  if (t < begin_s || t >= end_s) return 0.0;
  const double d = std::min(t - begin_s, end_s - t);
  if (d >= edge_s) return 1.0;
  return 0.5 - 0.5 * std::cos(std::numbers::pi * d / edge_s);
}

Signal ultrasound_chirp(const AttackSpec& spec, double duration_s, std::uint64_t seed) {
  const double fs = spec.ultrasound_rate_hz;
  const auto n = static_cast<std::size_t>(std::lround(duration_s * fs));
  const double begin = std::min(0.5, duration_s / 4.0);
  const double end = duration_s - begin;
  const double amp = db_to_amplitude(spec.ultrasound_db);
  const double rate = (spec.ultrasound_high_hz - spec.ultrasound_low_hz) / std::max(end - begin, 1e-3);
  Rng rng(seed);
  const double phase0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double tau = t - begin;
    const double phase = 2.0 * std::numbers::pi * (spec.ultrasound_low_hz * tau + 0.5 * rate * tau * tau);
    x[i] = amp * tapered_window(t, begin, end, 0.01) * std::sin(phase + phase0);
  }
  return Signal(std::move(x), fs);
}

}  // namespace

double AccelModel::distance_gain() const {
  if (distance_m > cutoff_distance_m) return 0.0;
  const double d = std::max(distance_m, reference_distance_m);
  const double r = reference_distance_m / d;
  return r * r;
}

void AccelModel::validate() const {
  if (!(f_ws_hz > 0.0)) throw Error(ErrorCode::kInvalidArgument, "f_ws must be positive");
  if (!(band_low_hz > 0.0) || !(band_low_hz < band_high_hz)) {
    throw Error(ErrorCode::kInvalidArgument, "response band must satisfy 0 < low < high");
  }
  if (band_order <= 0 || band_order % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "band_order must be even and positive");
  }
  if (!(distance_m > 0.0) || !(reference_distance_m > 0.0) || !(cutoff_distance_m > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "distances must be positive");
  }
  if (!(response_gain > 0.0)) throw Error(ErrorCode::kInvalidArgument, "response_gain must be positive");
  if (hand_noise_rms < 0.0 || sensor_noise_rms < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "noise levels must be non-negative");
  }
  if (!(hand_noise_max_hz > 0.0)) throw Error(ErrorCode::kInvalidArgument, "hand noise band must be positive");
  if (timestamp_jitter < 0.0 || timestamp_jitter >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "timestamp_jitter must lie in [0, 1)");
  }
  if (!(gate_frame_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gate_frame_s must be positive");
}

AccelTrace simulate_accel(const Signal& audio, const AccelModel& model, std::uint64_t seed) {
  model.validate();
  const double fs = audio.sample_rate_hz();
  if (fs < 2.0 * model.band_high_hz) {
    throw Error(ErrorCode::kRateTooLow, "audio rate " + std::to_string(fs) +
                                            " Hz is below twice the response band edge");
  }
  const auto count = static_cast<std::size_t>(std::floor(audio.duration_s() * model.f_ws_hz));
  if (count < 2) throw Error(ErrorCode::kInvalidArgument, "audio too short to simulate");

  std::vector<double> band =
      filtfilt(design_butterworth(FilterKind::kHighpass, model.band_order, model.band_low_hz, fs),
               audio.samples());
  if (model.band_high_hz < fs / 2.0) {
    band = filtfilt(
        design_butterworth(FilterKind::kLowpass, model.band_order, model.band_high_hz, fs), band);
  }
  const double gain = model.distance_gain();
  for (double& v : band) v *= gain;
  const auto gate = sensitivity_gate(band, fs, model.gate_frame_s, model.sensitivity_floor_db);
  for (std::size_t i = 0; i < band.size(); ++i) band[i] *= gate[i];

  // Point sampling with no anti-alias filter.
  std::vector<double> response(count);
  const double ratio = fs / model.f_ws_hz;
  for (std::size_t k = 0; k < count; ++k) {
    const double pos = static_cast<double>(k) * ratio;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    double v = band[std::min(i, band.size() - 1)];
    if (frac > 0.0 && i + 1 < band.size()) v += frac * (band[i + 1] - v);
    response[k] = model.response_gain * v;
  }

  Rng rng(seed);
  const auto orientation = random_unit_vector(rng);
  const auto down = random_unit_vector(rng);
  std::array<std::vector<double>, 3> hand;
  for (auto& h : hand) h = hand_noise(rng, count, model);

  AccelTrace trace;
  trace.nominal_rate_hz = model.f_ws_hz;
  trace.t.resize(count);
  std::array<std::vector<double>*, 3> axes{&trace.x, &trace.y, &trace.z};
  for (std::size_t a = 0; a < 3; ++a) {
    auto& axis = *axes[a];
    axis.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      axis[k] = orientation[a] * response[k] + model.gravity * down[a] + hand[a][k] +
                model.sensor_noise_rms * rng.normal();
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    const double jitter = model.timestamp_jitter * (rng.uniform() - 0.5);
    trace.t[k] = (static_cast<double>(k) + jitter) / model.f_ws_hz;
  }
  return trace;
}

Signal delay_signal(const Signal& signal, double delay_s) {
  const auto shift = std::lround(delay_s * signal.sample_rate_hz());
  const auto n = static_cast<long>(signal.size());
  std::vector<double> out(signal.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    const long src = i - shift;
    if (src >= 0 && src < n) out[static_cast<std::size_t>(i)] = signal[static_cast<std::size_t>(src)];
  }
  return Signal(std::move(out), signal.sample_rate_hz());
}

AccelTrace simulate_accel_delayed(const Signal& audio, const AccelModel& model, double lag_s,
                                  std::uint64_t seed) {
  return simulate_accel(delay_signal(audio, lag_s), model, seed);
}

Signal ambient_noise(double duration_s, double sample_rate_hz, double level_db, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate_hz));
  const double rms = db_to_amplitude(level_db);
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rms * rng.normal();
  return Signal(std::move(x), sample_rate_hz);
}

Signal synth_utterance(int word_id, std::uint64_t seed, double sample_rate_hz) {
  if (word_id < 0 || word_id >= kCorpusWords) {
    throw Error(ErrorCode::kUnknownWordId, "word id " + std::to_string(word_id) +
                                               " outside [0, " + std::to_string(kCorpusWords) + ")");
  }
  constexpr double kLead = 0.5;
  constexpr double kEdge = 0.015;
  constexpr double kFmin = 750.0;
  constexpr double kFmax = 3250.0;

  struct Formant {
    double f_start, f_end, amp;
  };
  // Images folded at the nominal wearable rate stay clear of the high-pass
  // region, of the Nyquist mirror and of each other along the whole glide.
  const auto folds_clear = [](const std::vector<Formant>& placed, const Formant& f) {
    constexpr double kFws = 200.0;
    const auto at = [](const Formant& x, double frac) {
      return fold_frequency(x.f_start + frac * (x.f_end - x.f_start), kFws);
    };
    for (int p = 0; p <= 4; ++p) {
      const double frac = p / 4.0;
      const double g = at(f, frac);
      if (g < 40.0 || g > 90.0) return false;
      for (const auto& o : placed) {
        if (std::abs(g - at(o, frac)) < 14.0) return false;
      }
    }
    return true;
  };
  struct Syllable {
    double start, duration;
    std::vector<Formant> formants;
  };

  // Word shape: fixed per word_id.
  Rng shape(mix_seed(0x5EED'0000'0000'0000ull, static_cast<std::uint64_t>(word_id)));
  const int n_syll = 4 + static_cast<int>(shape.index(3));
  std::vector<Syllable> syllables;
  double cursor = kLead;
  for (int s = 0; s < n_syll; ++s) {
    Syllable syl;
    syl.start = cursor;
    syl.duration = shape.uniform(0.16, 0.32);
    const int n_form = 2 + static_cast<int>(shape.index(2));
    for (int k = 0; k < n_form; ++k) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        Formant f;
        f.f_start = shape.uniform(kFmin, kFmax);
        f.f_end = std::clamp(f.f_start + shape.uniform(-30.0, 30.0), kFmin, kFmax);
        f.amp = shape.uniform(0.08, 0.2);
        if (folds_clear(syl.formants, f)) {
          syl.formants.push_back(f);
          break;
        }
      }
    }
    cursor += syl.duration + shape.uniform(0.04, 0.10);
    syllables.push_back(std::move(syl));
  }
  const double total = cursor + kLead;

  // Rendition: small perturbations per seed.
  Rng take(mix_seed(seed, 0xA11CE + static_cast<std::uint64_t>(word_id)));
  const double gain = db_to_amplitude(take.uniform(-2.0, 2.0));
  const double pitch = 1.0 + take.uniform(-0.003, 0.003);
  for (auto& syl : syllables) {
    syl.start += take.uniform(-0.008, 0.008);
    for (auto& f : syl.formants) f.amp *= db_to_amplitude(take.uniform(-1.0, 1.0));
  }

  const auto n = static_cast<std::size_t>(std::lround(total * sample_rate_hz));
  std::vector<double> x(n, 0.0);
  for (const auto& syl : syllables) {
    for (const auto& f : syl.formants) {
      const double f0 = f.f_start * pitch;
      const double rate = (f.f_end - f.f_start) * pitch / syl.duration;
      const double phase0 = take.uniform(0.0, 2.0 * std::numbers::pi);
      const auto b = static_cast<std::size_t>(std::max(0.0, syl.start * sample_rate_hz));
      const auto e = std::min(n, static_cast<std::size_t>((syl.start + syl.duration) * sample_rate_hz));
      for (std::size_t i = b; i < e; ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        const double tau = t - syl.start;
        const double env = tapered_window(t, syl.start, syl.start + syl.duration, kEdge);
        x[i] += gain * f.amp * env *
                std::sin(2.0 * std::numbers::pi * (f0 * tau + 0.5 * rate * tau * tau) + phase0);
      }
    }
  }
  return Signal(std::move(x), sample_rate_hz);
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNormal: return "normal";
    case AttackKind::kRandomAttack: return "random_attack";
    case AttackKind::kReplay: return "replay";
    case AttackKind::kHiddenCommand: return "hidden_command";
    case AttackKind::kUltrasound: return "ultrasound";
  }
  return "normal";
}

AttackKind attack_kind_from_string(std::string_view name) {
  if (name == "normal") return AttackKind::kNormal;
  if (name == "random_attack") return AttackKind::kRandomAttack;
  if (name == "replay") return AttackKind::kReplay;
  if (name == "hidden_command") return AttackKind::kHiddenCommand;
  if (name == "ultrasound") return AttackKind::kUltrasound;
  throw Error(ErrorCode::kInvalidArgument, "unknown attack kind '" + std::string(name) + "'");
}

std::string_view to_string(TrialLabel label) {
  return label == TrialLabel::kLegit ? "legit" : "attack";
}

TrialLabel trial_label_from_string(std::string_view name) {
  if (name == "legit") return TrialLabel::kLegit;
  if (name == "attack") return TrialLabel::kAttack;
  throw Error(ErrorCode::kInvalidArgument, "unknown label '" + std::string(name) + "'");
}

AbsentSource AttackSpec::effective_absent_source() const {
  if (absent_source) return *absent_source;
  return kind == AttackKind::kRandomAttack ? AbsentSource::kOtherUtterance : AbsentSource::kAmbient;
}

void AttackSpec::validate() const {
  model.validate();
  if (max_lag_s < 0.0) throw Error(ErrorCode::kInvalidArgument, "max_lag_s must be non-negative");
  if (other_word_id && (*other_word_id < 0 || *other_word_id >= kCorpusWords)) {
    throw Error(ErrorCode::kUnknownWordId, "other_word_id out of range");
  }
  if (kind == AttackKind::kHiddenCommand && !(speaker_distance_m > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "speaker_distance_m must be positive");
  }
  if (kind == AttackKind::kUltrasound) {
    if (ultrasound_rate_hz < 8000.0 || ultrasound_rate_hz > 96000.0) {
      throw Error(ErrorCode::kInvalidArgument, "ultrasound_rate_hz must lie in 8000..96000");
    }
    if (!(ultrasound_low_hz > 0.0) || !(ultrasound_low_hz < ultrasound_high_hz) ||
        !(ultrasound_high_hz < ultrasound_rate_hz / 2.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ultrasound chirp must satisfy 0 < low < high < rate / 2");
    }
  }
}

Trial generate_attack(const AttackSpec& spec, const Signal& legit_audio, std::uint64_t seed) {
  spec.validate();
  if (legit_audio.empty()) throw Error(ErrorCode::kInvalidArgument, "legit audio is empty");

  Rng rng(mix_seed(seed, 1));
  const double lag = spec.lag_s.value_or(rng.uniform(-spec.max_lag_s, spec.max_lag_s));
  const int other_word =
      spec.other_word_id.value_or(static_cast<int>(rng.index(kCorpusWords)));
  const double fs = legit_audio.sample_rate_hz();
  const double duration = legit_audio.duration_s();
  const auto mic_noise = [&](double rate) {
    return ambient_noise(duration, rate, spec.mic_ambient_db, mix_seed(seed, 2));
  };
  const auto accel_seed = mix_seed(seed, 3);

  // Recording of a wearable whose owner is elsewhere.
  const auto absent_wearable = [&]() {
    if (spec.effective_absent_source() == AbsentSource::kOtherUtterance) {
      const int own_word = (other_word + 1 + static_cast<int>(rng.index(kCorpusWords - 1))) % kCorpusWords;
      return simulate_accel_delayed(synth_utterance(own_word, mix_seed(seed, 5), fs), spec.model,
                                    lag, accel_seed);
    }
    return simulate_accel_delayed(ambient_noise(duration, fs, -50.0, mix_seed(seed, 6)),
                                  spec.model, lag, accel_seed);
  };

  Trial trial;
  trial.kind = spec.kind;
  trial.lag_s = lag;
  trial.label = spec.kind == AttackKind::kNormal ? TrialLabel::kLegit : TrialLabel::kAttack;

  switch (spec.kind) {
    case AttackKind::kNormal: {
      trial.mic = mix(legit_audio, mic_noise(fs));
      trial.accel = simulate_accel_delayed(legit_audio, spec.model, lag, accel_seed);
      break;
    }
    case AttackKind::kRandomAttack: {
      const Signal attacker = synth_utterance(other_word, mix_seed(seed, 4), fs);
      trial.mic = mix(attacker, mic_noise(attacker.sample_rate_hz()));
      trial.accel = absent_wearable();
      break;
    }
    case AttackKind::kReplay: {
      // loudspeaker playback: slight level change and no low-frequency content
      const auto speaker = design_butterworth(FilterKind::kHighpass, 2, 150.0, fs);
      const Signal replayed(filtfilt(speaker, legit_audio.samples()), fs);
      trial.mic = mix(scaled(replayed, 0.9), mic_noise(fs));
      trial.accel = absent_wearable();
      break;
    }
    case AttackKind::kHiddenCommand: {
      const double edge = std::min(0.45, duration / 4.0);
      Signal noise = ambient_noise(duration, fs, spec.hidden_noise_db, mix_seed(seed, 7));
      std::vector<double> masked(noise.samples().begin(), noise.samples().end());
      for (std::size_t i = 0; i < masked.size(); ++i) {
        masked[i] *= tapered_window(static_cast<double>(i) / fs, edge, duration - edge, 0.02);
      }
      const Signal hidden = mix(legit_audio, Signal(std::move(masked), fs));
      trial.mic = mix(hidden, mic_noise(fs));
      AccelModel far = spec.model;
      far.distance_m = spec.speaker_distance_m;
      trial.accel = simulate_accel_delayed(hidden, far, lag, accel_seed);
      break;
    }
    case AttackKind::kUltrasound: {
      const Signal chirp = ultrasound_chirp(spec, duration, mix_seed(seed, 8));
      trial.mic = mix(chirp, mic_noise(chirp.sample_rate_hz()));
      trial.accel = simulate_accel_delayed(chirp, spec.model, lag, accel_seed);
      break;
    }
  }
  return trial;
}

}  // namespace vibraverify
