// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vibraverify/error.hpp"
#include "vibraverify/filter.hpp"

namespace vibraverify {
namespace {

struct NoiseStats {
  double mean = 0.0;
  double stddev = 0.0;
};

NoiseStats stats_of(const std::vector<double>& v) {
  NoiseStats s;
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(acc / static_cast<double>(v.size()));
  return s;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

// Windows whose variance is at or below the global 10th percentile.
std::vector<double> quietest_decile(const std::vector<double>& var) {
  const double p10 = percentile(var, 0.10);
  std::vector<double> quiet;
  std::copy_if(var.begin(), var.end(), std::back_inserter(quiet),
               [p10](double v) { return v <= p10; });
  return quiet;
}

double threshold_from(const std::vector<double>& noise, const SegmentationParams& p) {
  const auto s = stats_of(noise);
  return std::max({s.mean + p.k_sigma * s.stddev, p.min_ratio * s.mean, p.variance_floor});
}

struct Windows {
  std::size_t len = 0;
  std::size_t hop = 0;
  std::vector<double> var;
};

Windows windows_for(const Signal& signal, const SegmentationParams& p) {
  Windows w;
  const double fs = signal.sample_rate_hz();
  w.len = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(p.window_s * fs)));
  w.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(p.hop_s * fs)));
  w.var = moving_variance(signal.samples(), w.len, w.hop);
  return w;
}

}  // namespace

Signal highpass_accel(const Signal& signal, double cutoff_hz, int order) {
  if (!(signal.sample_rate_hz() > 2.0 * cutoff_hz)) {
    throw Error(ErrorCode::kCutoffAboveNyquist,
                "high-pass cutoff " + std::to_string(cutoff_hz) + " Hz needs fs > 2x cutoff");
  }
  const auto sos =
      design_butterworth(FilterKind::kHighpass, order, cutoff_hz, signal.sample_rate_hz());
  return Signal(filtfilt(sos, signal.samples()), signal.sample_rate_hz());
}

Signal bandpass_mic(const Signal& signal, double low_hz, double high_hz, int order) {
  if (!(low_hz < high_hz)) {
    throw Error(ErrorCode::kInvalidBand, "band-pass low edge must be below the high edge");
  }
  const double fs = signal.sample_rate_hz();
  const double nyquist = fs / 2.0;
  if (!(low_hz > 0.0) || low_hz >= nyquist) {
    throw Error(ErrorCode::kCutoffAboveNyquist, "band-pass low edge must lie below Nyquist");
  }
  auto y = filtfilt(design_butterworth(FilterKind::kHighpass, order, low_hz, fs), signal.samples());
  if (high_hz < nyquist) {
    y = filtfilt(design_butterworth(FilterKind::kLowpass, order, high_hz, fs), y);
  }
  return Signal(std::move(y), fs);
}

std::vector<double> moving_variance(std::span<const double> x, std::size_t window_len,
                                    std::size_t hop) {
  std::vector<double> out;
  if (window_len == 0 || hop == 0 || x.size() < window_len) return out;
  for (std::size_t start = 0; start + window_len <= x.size(); start += hop) {
    const auto w = x.subspan(start, window_len);
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(window_len);
    double acc = 0.0;
    for (double v : w) acc += (v - mean) * (v - mean);
    out.push_back(acc / static_cast<double>(window_len));
  }
  return out;
}

Segment segment_mic(const Signal& signal, const SegmentationParams& params) {
  if (signal.duration_s() < 0.2) {
    throw Error(ErrorCode::kInvalidArgument, "microphone segmentation needs at least 0.2 s");
  }
  const double fs = signal.sample_rate_hz();
  const auto w = windows_for(signal, params);
  if (w.var.empty()) throw Error(ErrorCode::kNoCommandDetected, "signal shorter than one window");

  const auto ref_samples = static_cast<std::size_t>(std::lround(params.noise_ref_s * fs));
  std::vector<double> leading;
  for (std::size_t j = 0; j < w.var.size() && j * w.hop + w.len <= ref_samples; ++j) {
    leading.push_back(w.var[j]);
  }
  const double p10 = percentile(w.var, 0.10);
  const bool leading_is_noise =
      leading.size() >= 2 && stats_of(leading).mean <= 2.0 * p10 + params.variance_floor;
  const double threshold =
      threshold_from(leading_is_noise ? leading : quietest_decile(w.var), params);

  std::size_t first = w.var.size();
  std::size_t last = 0;
  for (std::size_t j = 0; j < w.var.size(); ++j) {
    if (w.var[j] > threshold) {
      first = std::min(first, j);
      last = j;
    }
  }
  if (first == w.var.size()) {
    throw Error(ErrorCode::kNoCommandDetected, "no window exceeds the noise threshold");
  }

  const double win_s = static_cast<double>(w.len) / fs;
  Segment seg;
  seg.source = SegmentSource::kMic;
  seg.start_s = std::max(0.0, static_cast<double>(first * w.hop) / fs - win_s);
  seg.end_s = std::min(signal.duration_s(), static_cast<double>(last * w.hop + w.len) / fs + win_s);
  return seg;
}

AssistedSegment segment_accel_assisted(const Signal& signal, const Segment& mic_segment,
                                       double w_t_s, const SegmentationParams& params) {
  if (signal.empty()) throw Error(ErrorCode::kEmptyTrace, "accelerometer signal is empty");
  if (!(mic_segment.end_s > mic_segment.start_s) || mic_segment.start_s < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid microphone segment");
  }
  const double fs = signal.sample_rate_hz();
  const double duration = signal.duration_s();
  const double length = mic_segment.length_s();
  const double sample_s = 1.0 / fs;

  auto make = [&](double start, bool fallback) {
    start = std::clamp(start, 0.0, std::max(0.0, duration - sample_s));
    AssistedSegment out;
    out.fallback = fallback;
    out.segment.source = SegmentSource::kAccel;
    out.segment.start_s = start;
    out.segment.end_s = std::min(duration, start + length);
    return out;
  };

  const auto w = windows_for(signal, params);
  if (w.var.empty()) return make(mic_segment.start_s, true);

  // Onset time attributed to window j: its last sample.
  auto onset_of = [&](std::size_t j) {
    return static_cast<double>(j * w.hop + w.len - 1) / fs;
  };
  auto window_start = [&](std::size_t j) { return static_cast<double>(j * w.hop) / fs; };

  const double search_lo = mic_segment.start_s - w_t_s;
  const double search_hi = mic_segment.start_s + w_t_s;
  const double busy_lo = search_lo;
  const double busy_hi = mic_segment.end_s + w_t_s;

  std::vector<double> outside;
  for (std::size_t j = 0; j < w.var.size(); ++j) {
    const double ws = window_start(j);
    const double we = ws + static_cast<double>(w.len) / fs;
    if (we <= busy_lo || ws >= busy_hi) outside.push_back(w.var[j]);
  }
  const double threshold =
      threshold_from(outside.size() >= 3 ? outside : quietest_decile(w.var), params);

  for (std::size_t j = 0; j < w.var.size(); ++j) {
    const double onset = onset_of(j);
    if (onset < search_lo) continue;
    if (onset > search_hi) break;
    if (w.var[j] > threshold) return make(onset, false);
  }
  return make(mic_segment.start_s, true);
}

}  // namespace vibraverify
