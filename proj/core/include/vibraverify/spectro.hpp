// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vibraverify/signal.hpp"

namespace vibraverify {

enum class WindowKind { kHann, kRect };

std::string_view to_string(WindowKind kind);
WindowKind window_from_string(std::string_view name);

struct StftParams {
  std::size_t n_fft = 2048;
  std::size_t hop = 512;
  WindowKind window = WindowKind::kHann;

  /// Throws kInvalidArgument unless 0 < hop <= n_fft and n_fft is a power of two.
  void validate() const;

  static StftParams mic_defaults() { return {2048, 512, WindowKind::kHann}; }
  static StftParams accel_defaults() { return {64, 16, WindowKind::kHann}; }
};

/// Periodic window of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

/// One-sided power spectrogram |STFT|^2.
///
/// Produces floor((M - N) / hop) + 1 columns of N / 2 + 1 bins. Column c
/// covers samples [c * hop, c * hop + N) and is stamped with the time of its
/// frame centre, so t0_s = N / (2 fs). Throws kSignalTooShort when M < N.
Spectrogram stft_power(const Signal& signal, const StftParams& params,
                       SpectrogramOrigin origin = SpectrogramOrigin::kMic);

struct SweepPoint {
  double time_s = 0.0;
  std::optional<double> peak_hz;  // empty for columns below 1e-12 power
};

/// Frequency of the strongest bin in every column.
std::vector<SweepPoint> sweep_curve(const Spectrogram& spec);

/// Index of the strongest bin of a column (lowest index on ties).
std::size_t column_argmax(const Spectrogram& spec, std::size_t col);

// Dump format: one JSON header line
//   {"bin_hz":..,"col_step_s":..,"cols":..,"origin":"mic|accel|converted","rows":..}
// terminated by '\n', followed by cols * rows little-endian float32 values,
// one column (time step) after another.
std::vector<std::uint8_t> encode_spectrogram_dump(const Spectrogram& spec);
Spectrogram decode_spectrogram_dump(std::span<const std::uint8_t> bytes);
void write_spectrogram_dump(const std::filesystem::path& path, const Spectrogram& spec);

}  // namespace vibraverify
