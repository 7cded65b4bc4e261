// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vibraverify/signal.hpp"

namespace vibraverify {

enum class Verdict { kAccept, kReject };
enum class RejectReason { kLowSimilarity, kEmptyAccel, kEmptyMic };

std::string_view to_string(Verdict verdict);
std::string_view to_string(RejectReason reason);

struct ShiftScore {
  double shift_s = 0.0;
  double corr = 0.0;
};

struct SimilarityReport {
  double peak_corr = 0.0;
  double best_shift_s = 0.0;
  std::vector<ShiftScore> curve;  // ascending shift
  Verdict verdict = Verdict::kReject;
  std::optional<RejectReason> reject_reason;
  /// The best shift sits on the edge of the search range, so the true offset
  /// may lie outside it.
  bool at_search_edge = false;
};

/// Linear resampling of every row onto cols columns starting at t0_s and
/// spaced step_s apart. Times outside the input extent clamp to the edge
/// columns. Throws kEmptySpectrogram for an empty input.
Spectrogram resample_columns(const Spectrogram& spec, double t0_s, double step_s, std::size_t cols);

/// Row-wise linear interpolation to target_cols columns over the same time
/// extent; col_step_s is rescaled to match. Throws kEmptySpectrogram, or
/// kInvalidArgument when target_cols < 2.
Spectrogram interpolate_time(const Spectrogram& spec, std::size_t target_cols);

/// Per-column min-max scaling to [0, 1]. Constant columns become zero.
Spectrogram normalize_2d(const Spectrogram& spec);

/// Mean-centred 2-D correlation coefficient over all entries (or the plain
/// cosine similarity when centered is false). Defined as 0 when either input
/// has no variation. Throws kShapeMismatch for unequal lengths.
double correlation(std::span<const double> a, std::span<const double> b, bool centered = true);
double corr2d(const Spectrogram& a, const Spectrogram& b, bool centered = true);

struct ShiftCorrOptions {
  double max_shift_s = 0.5;
  std::size_t step_cols = 1;
  double eta = 0.49;
  bool centered = true;
};

/// Shift 2-D correlation. The converted microphone spectrogram stays fixed;
/// the accelerometer spectrogram is slid by whole columns over
/// [-max_shift_s, +max_shift_s]. A positive shift means the accelerometer
/// content lags the microphone content. The compared region is the set of
/// microphone columns that have accelerometer partners for every shift, so
/// every shift is scored over the same window. Ties prefer the smallest
/// |shift|, then the negative one.
///
/// Both inputs must share their row count and column step; columns are
/// aligned through their t0_s stamps. Throws kShapeMismatch or
/// kWindowTooSmall (fewer than 4 comparable columns).
SimilarityReport shift_corr(const Spectrogram& mic_converted, const Spectrogram& accel,
                            const ShiftCorrOptions& options = {});

}  // namespace vibraverify
