// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "vibraverify/signal.hpp"

namespace vibraverify {

enum class SegmentSource { kMic, kAccel };

/// Command extent in seconds from the start of its signal.
struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  SegmentSource source = SegmentSource::kMic;

  double length_s() const noexcept { return end_s - start_s; }
};

/// Moving-variance envelope detector settings. The detector fires where the
/// windowed variance exceeds max(mu + k_sigma * sigma, min_ratio * mu,
/// variance_floor), with mu and sigma taken over the noise-reference windows.
struct SegmentationParams {
  double window_s = 0.025;
  double hop_s = 0.010;
  double k_sigma = 3.0;
  double noise_ref_s = 0.100;
  double variance_floor = 1e-8;
  double min_ratio = 2.0;

  static SegmentationParams mic_defaults() { return {}; }
  static SegmentationParams accel_defaults() {
    return {.window_s = 0.100, .hop_s = 0.010, .k_sigma = 3.0, .noise_ref_s = 0.100,
            .variance_floor = 1e-12, .min_ratio = 3.0};
  }
};

/// 4th-order Butterworth high-pass applied forward and backward.
/// Throws kCutoffAboveNyquist unless sample_rate_hz > 2 * cutoff_hz.
Signal highpass_accel(const Signal& signal, double cutoff_hz = 30.0, int order = 4);

/// Zero-phase band-pass (high-pass at low_hz cascaded with low-pass at
/// high_hz). When high_hz reaches Nyquist only the high-pass stage is kept.
/// Throws kInvalidBand when low_hz >= high_hz.
Signal bandpass_mic(const Signal& signal, double low_hz = 300.0, double high_hz = 4000.0,
                    int order = 4);

/// Population variance of each window of window_len samples, advancing by hop.
std::vector<double> moving_variance(std::span<const double> x, std::size_t window_len,
                                    std::size_t hop);

/// Locates the voice command in microphone audio. Noise statistics come
/// from the first noise_ref_s seconds unless that region is itself loud
/// (mean variance above twice the global 10th percentile), in which case the
/// quietest decile of windows is used instead. The detected span is padded by
/// one window on each side. Throws kNoCommandDetected.
Segment segment_mic(const Signal& signal,
                    const SegmentationParams& params = SegmentationParams::mic_defaults());

struct AssistedSegment {
  Segment segment;
  bool fallback = false;  // no onset found; segment starts at the mic start
};

/// Finds the accelerometer onset within +/- w_t_s of the microphone start and
/// gives the segment the microphone command length, clamped to the signal.
AssistedSegment segment_accel_assisted(
    const Signal& signal, const Segment& mic_segment, double w_t_s = 0.3,
    const SegmentationParams& params = SegmentationParams::accel_defaults());

}  // namespace vibraverify
