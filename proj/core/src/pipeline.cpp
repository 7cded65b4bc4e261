// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vibraverify/accel.hpp"
#include "vibraverify/convert.hpp"
#include "vibraverify/error.hpp"
#include "vibraverify/spectro.hpp"

namespace vibraverify {
namespace {

Signal crop(const Signal& s, double begin_s, double end_s) {
  const double fs = s.sample_rate_hz();
  const auto b = static_cast<std::size_t>(std::clamp(std::floor(begin_s * fs), 0.0,
                                                     static_cast<double>(s.size())));
  const auto e = static_cast<std::size_t>(std::clamp(std::ceil(end_s * fs), static_cast<double>(b),
                                                     static_cast<double>(s.size())));
  return s.slice(b, e);
}

// Samples from index `first` (may be negative) up to `last`, zero outside the signal.
Signal window_padded(const Signal& s, long first, long last) {
  std::vector<double> out(static_cast<std::size_t>(std::max(0L, last - first)), 0.0);
  const long n = static_cast<long>(s.size());
  for (long i = std::max(0L, first); i < std::min(n, last); ++i) {
    out[static_cast<std::size_t>(i - first)] = s[static_cast<std::size_t>(i)];
  }
  return Signal(std::move(out), s.sample_rate_hz());
}

// Grows [begin, end) to at least min_len samples, staying inside the signal.
std::pair<double, double> ensure_length(double begin_s, double end_s, double min_s, double total_s) {
  if (end_s - begin_s >= min_s) return {begin_s, end_s};
  const double grow = (min_s - (end_s - begin_s)) / 2.0;
  begin_s -= grow;
  end_s += grow;
  if (begin_s < 0.0) {
    end_s -= begin_s;
    begin_s = 0.0;
  }
  if (end_s > total_s) {
    begin_s = std::max(0.0, begin_s - (end_s - total_s));
    end_s = total_s;
  }
  return {begin_s, end_s};
}

// Accel spectrogram resampled onto the grid of mic column times extended
// outward in whole steps as far as the accel extent reaches.
Spectrogram align_to_mic_grid(const Spectrogram& accel, const Spectrogram& mic) {
  const double step = mic.col_step_s();
  const double a_first = accel.t0_s();
  const double a_last = accel.col_time_s(accel.cols() - 1);
  const double before = std::floor((mic.t0_s() - a_first) / step + 1e-9);
  const double t0 = mic.t0_s() - before * step;
  const double count = std::floor((a_last - t0) / step + 1e-9) + 1.0;
  if (count < 1.0) throw Error(ErrorCode::kWindowTooSmall, "accelerometer does not overlap the command");
  return resample_columns(accel, t0, step, static_cast<std::size_t>(count));
}

Spectrogram drop_rows_below(const Spectrogram& spec, double min_hz) {
  const auto first = std::min(spec.bins() - 1,
                              static_cast<std::size_t>(std::ceil(min_hz / spec.bin_hz() - 1e-9)));
  if (first == 0) return spec;
  Spectrogram out(spec.cols(), spec.bins() - first, spec.col_step_s(), spec.bin_hz(), spec.origin());
  out.set_t0_s(spec.t0_s());
  out.set_ref_power(spec.ref_power());
  for (std::size_t c = 0; c < spec.cols(); ++c) {
    const auto src = spec.column(c);
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(first), src.end(), out.column(c).begin());
  }
  return out;
}

SimilarityReport early_reject(RejectReason reason) {
  SimilarityReport r;
  r.verdict = Verdict::kReject;
  r.reject_reason = reason;
  return r;
}

}  // namespace

StftParams mic_stft_for_rate(const MicConfig& mic, double sample_rate_hz) {
  StftParams p = mic.stft;
  if (!mic.scale_fft_with_rate || sample_rate_hz == mic.reference_rate_hz) return p;
  const double ratio = sample_rate_hz / mic.reference_rate_hz;
  const auto n = static_cast<std::size_t>(
      std::exp2(std::round(std::log2(static_cast<double>(p.n_fft) * ratio))));
  const double hop_frac = static_cast<double>(p.hop) / static_cast<double>(p.n_fft);
  p.n_fft = std::max<std::size_t>(n, 2);
  p.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hop_frac * static_cast<double>(p.n_fft))));
  return p;
}

VerifyResult verify_detailed(const Signal& mic, const AccelTrace& accel, const VerifyConfig& config) {
  config.validate();
  accel.validate();
  VerifyResult out;

  const auto samples = mic.samples();
  const double peak = std::transform_reduce(samples.begin(), samples.end(), 0.0,
                                            [](double a, double b) { return std::max(a, b); },
                                            [](double v) { return std::abs(v); });
  if (peak <= config.mic.silence_level) {
    out.report = early_reject(RejectReason::kEmptyMic);
    return out;
  }

  const double mic_total = mic.duration_s();
  const Signal mic_f =
      bandpass_mic(mic, config.mic.band_low_hz, config.mic.band_high_hz, config.mic.filter_order);
  try {
    out.mic_segment = segment_mic(mic_f, config.mic.segmentation);
    out.mic_detected = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoCommandDetected) throw;
    out.mic_segment = {0.0, mic_total, SegmentSource::kMic};
  }

  const Signal axis = select_axis(regularize(accel), config.accel.axis_min_hz);
  const Signal accel_f = highpass_accel(axis, config.accel.highpass_hz, config.accel.filter_order);
  const auto assisted =
      segment_accel_assisted(accel_f, out.mic_segment, config.accel.w_t_s, config.accel.segmentation);
  out.accel_segment = assisted.segment;
  out.accel_detected = !assisted.fallback;

  const StftParams mic_stft = mic_stft_for_rate(config.mic, mic.sample_rate_hz());
  // at least four analysis frames of command audio
  const double min_mic_s =
      static_cast<double>(mic_stft.n_fft + 3 * mic_stft.hop) / mic.sample_rate_hz();
  const auto [mb, me] = ensure_length(out.mic_segment.start_s, out.mic_segment.end_s,
                                      min_mic_s, mic_total);
  const Signal mic_crop = crop(mic_f, mb, me);
  if (mic_crop.size() < mic_stft.n_fft) {
    throw Error(ErrorCode::kSignalTooShort, "microphone audio shorter than one analysis frame");
  }

  // Accelerometer context covering every shift; zero beyond the recording.
  const double accel_fs = accel_f.sample_rate_hz();
  const double reach = config.similarity.max_shift_s + config.crop_margin_s +
                       static_cast<double>(config.accel.stft.n_fft) / accel_fs / 2.0;
  const long accel_first = std::lround(std::floor((mb - reach) * accel_fs));
  const long accel_last = std::lround(std::ceil((me + reach) * accel_fs));
  const Signal accel_crop = window_padded(accel_f, accel_first, accel_last);

  try {
    Spectrogram mic_spec = stft_power(mic_crop, mic_stft, SpectrogramOrigin::kMic);
    mic_spec.set_t0_s(mic_spec.t0_s() + std::floor(mb * mic.sample_rate_hz()) /
                                            mic.sample_rate_hz());
    Spectrogram accel_spec = stft_power(accel_crop, config.accel.stft, SpectrogramOrigin::kAccel);
    accel_spec.set_t0_s(accel_spec.t0_s() + static_cast<double>(accel_first) / accel_fs);

    ConversionParams conversion = config.conversion;
    conversion.f_ws_hz = accel_fs;
    conversion.target_bins = accel_spec.bins();
    const Spectrogram converted = convert_spectrogram(mic_spec, conversion);

    Spectrogram mic_rows = converted;
    if (config.time_upsample > 1 && converted.cols() > 1) {
      const std::size_t cols = (converted.cols() - 1) * config.time_upsample + 1;
      mic_rows = resample_columns(converted, converted.t0_s(),
                                  converted.col_step_s() / static_cast<double>(config.time_upsample), cols);
    }
    Spectrogram accel_rows = align_to_mic_grid(accel_spec, mic_rows);
    if (config.compare_above_highpass) {
      mic_rows = drop_rows_below(mic_rows, config.accel.highpass_hz);
      accel_rows = drop_rows_below(accel_rows, config.accel.highpass_hz);
    }
    out.mic_converted = normalize_2d(mic_rows);
    out.accel_aligned = normalize_2d(accel_rows);
    out.report = shift_corr(out.mic_converted, out.accel_aligned, config.similarity);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kWindowTooSmall && e.code() != ErrorCode::kSignalTooShort) throw;
    out.report = early_reject(RejectReason::kLowSimilarity);
  }

  if (!out.accel_detected) {
    out.report.reject_reason = RejectReason::kEmptyAccel;
  } else if (!out.mic_detected && !out.report.reject_reason) {
    out.report.reject_reason = RejectReason::kEmptyMic;
  }
  out.report.verdict = out.report.reject_reason ? Verdict::kReject : Verdict::kAccept;
  return out;
}

SimilarityReport verify(const Signal& mic, const AccelTrace& accel, const VerifyConfig& config) {
  return verify_detailed(mic, accel, config).report;
}

std::string verdict_json(const SimilarityReport& report, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["verdict"] = std::string(to_string(report.verdict));
  j["score"] = report.peak_corr;
  j["best_shift_s"] = report.best_shift_s;
  j["reason"] = report.reject_reason ? nlohmann::ordered_json(std::string(to_string(*report.reject_reason)))
                                     : nlohmann::ordered_json(nullptr);
  j["config_hash"] = config_hash;
  return j.dump();
}

}  // namespace vibraverify
