// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>

#include "vibraverify/signal.hpp"

namespace vibraverify {

/// Settings for re-binning a microphone spectrogram onto the accelerometer's
/// aliased frequency grid.
struct ConversionParams {
  double f_ws_hz = 200.0;  // accelerometer sample rate
  double band_low_hz = 700.0;
  double band_high_hz = 3300.0;
  /// Minimum bin power in dBFS (0 dBFS = a full-scale sinusoid on a bin
  /// centre). nullopt disables amplitude selection.
  std::optional<double> amp_threshold_db = -40.0;
  /// Half-width of the shift search used by the loop formulation. 0 selects
  /// max(10, ceil(band_high_hz / f_ws_hz)).
  int n_shift_range = 0;
  /// Rows of the output grid; they span [0, f_ws_hz / 2] inclusive.
  std::size_t target_bins = 33;

  double output_bin_hz() const noexcept {
    return f_ws_hz / 2.0 / static_cast<double>(target_bins - 1);
  }
  int effective_shift_range() const;

  /// Throws kInvalidArgument on an empty band, a non-positive rate, fewer
  /// than two target bins or an explicit shift range too narrow for the band.
  void validate() const;
};

/// Apparent frequency of a tone at f_hz sampled at f_ws_hz with no
/// anti-alias filter: min over integer N of |f - N * f_ws|, in [0, f_ws / 2].
double fold_frequency(double f_hz, double f_ws_hz);

/// Output row that a folded frequency lands on (nearest, ties round up).
std::size_t folded_bin(double f_hz, const ConversionParams& params);

/// Whether a microphone bin passes frequency and amplitude selection.
bool bin_selected(const Spectrogram& mic, std::size_t bin, double power,
                  const ConversionParams& params);

/// Aliased form of a microphone spectrogram. Each selected bin's power is
/// added to the output row nearest its folded frequency; columns and their
/// timing are unchanged. Throws kInvalidArgument for a non-microphone input
/// and kGridMismatch when the output grid is more than twice as fine as the
/// microphone bin spacing.
Spectrogram convert_spectrogram(const Spectrogram& mic, const ConversionParams& params);

/// The same conversion written as an explicit search over shifts N with the
/// guard 0 < |f - N f_ws| <= f_ws / 2. Differs from convert_spectrogram only
/// for folds landing exactly on DC (dropped here) or on Nyquist (counted for
/// both neighbouring N here). Kept as an independent cross-check.
Spectrogram convert_spectrogram_by_shift_search(const Spectrogram& mic,
                                                const ConversionParams& params);

}  // namespace vibraverify
