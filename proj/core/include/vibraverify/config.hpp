// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "vibraverify/convert.hpp"
#include "vibraverify/preprocess.hpp"
#include "vibraverify/similarity.hpp"
#include "vibraverify/spectro.hpp"

namespace vibraverify {

struct MicConfig {
  double band_low_hz = 300.0;
  double band_high_hz = 4000.0;
  int filter_order = 4;
  StftParams stft = StftParams::mic_defaults();
  /// Scale n_fft (and hop) with the sample rate so frames keep the duration
  /// they have at reference_rate_hz.
  bool scale_fft_with_rate = true;
  double reference_rate_hz = 8000.0;
  SegmentationParams segmentation = SegmentationParams::mic_defaults();
  /// Peak magnitude at or below which the recording counts as silent.
  double silence_level = 1e-6;
};

struct AccelConfig {
  double highpass_hz = 30.0;
  int filter_order = 4;
  StftParams stft = StftParams::accel_defaults();
  double axis_min_hz = 30.0;
  double w_t_s = 0.3;
  SegmentationParams segmentation = SegmentationParams::accel_defaults();
};

/// Every tunable of the verification pipeline. f_ws_hz and target_bins of
/// the conversion are taken from the accelerometer data at run time.
struct VerifyConfig {
  MicConfig mic;
  AccelConfig accel;
  ConversionParams conversion;
  ShiftCorrOptions similarity;
  /// Extra accelerometer context kept on each side of the search range.
  double crop_margin_s = 0.2;
  /// Score only rows at or above the accelerometer high-pass cutoff, where
  /// the accelerometer can still carry folded sound.
  bool compare_above_highpass = true;
  /// Both spectrograms are interpolated onto a time grid this many times
  /// finer than the microphone column step before shifting, so whole-column
  /// shifts can follow sub-column trigger lags.
  std::size_t time_upsample = 4;

  void validate() const;
};

/// Missing keys keep their defaults; unknown keys and wrong types throw
/// kInvalidArgument.
VerifyConfig parse_config(std::string_view json_text);
VerifyConfig load_config(const std::filesystem::path& path);

/// Canonical JSON with every parameter present.
std::string config_to_json(const VerifyConfig& config);

/// 64-bit FNV-1a of the canonical JSON, 16 lower-case hex digits.
std::string config_hash(const VerifyConfig& config);

}  // namespace vibraverify
