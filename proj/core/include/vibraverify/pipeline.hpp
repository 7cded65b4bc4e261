// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "vibraverify/config.hpp"
#include "vibraverify/preprocess.hpp"
#include "vibraverify/signal.hpp"
#include "vibraverify/similarity.hpp"

namespace vibraverify {

struct VerifyResult {
  SimilarityReport report;
  Segment mic_segment;
  bool mic_detected = false;
  Segment accel_segment;
  bool accel_detected = false;
  /// Spectrograms as compared (converted mic and accel on the mic column
  /// grid, both normalised, rows below the accel high-pass cutoff removed
  /// when configured). Empty when the pipeline stopped early.
  Spectrogram mic_converted;
  Spectrogram accel_aligned;
};

/// n_fft and hop used for microphone audio at sample_rate_hz.
StftParams mic_stft_for_rate(const MicConfig& mic, double sample_rate_hz);

/// Full pipeline: band-pass and segment the microphone audio, regularise,
/// pick an axis, high-pass and segment the accelerometer trace, compute both
/// spectrograms, convert the microphone one to the accelerometer grid,
/// normalise and score with shift correlation. Missing content on either side
/// becomes a reject with the matching reason; bad input throws.
VerifyResult verify_detailed(const Signal& mic, const AccelTrace& accel,
                             const VerifyConfig& config = {});

SimilarityReport verify(const Signal& mic, const AccelTrace& accel,
                        const VerifyConfig& config = {});

/// {"verdict":..,"score":..,"best_shift_s":..,"reason":..,"config_hash":..}
std::string verdict_json(const SimilarityReport& report, const std::string& config_hash);

}  // namespace vibraverify
