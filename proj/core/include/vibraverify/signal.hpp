// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace vibraverify {

/// Uniformly sampled real signal. Audio is full-scale +/-1.0; accelerometer
/// axes are in m/s^2. Samples are validated finite on construction.
class Signal {
 public:
  Signal() = default;
  Signal(std::vector<double> samples, double sample_rate_hz);

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  /// Copy of samples [begin, end) as a new signal at the same rate.
  Signal slice(std::size_t begin, std::size_t end) const;

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_hz_ = 1.0;
};

/// Timestamped 3-axis accelerometer record as delivered by a wearable.
/// Timestamps are seconds on the wearable's own clock and may be jittered.
struct AccelTrace {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  double nominal_rate_hz = 0.0;

  std::size_t size() const noexcept { return t.size(); }

  /// Throws Error(kEmptyTrace / kNonMonotonicTime / kInvalidArgument).
  void validate() const;
};

using AxisTriple = std::array<Signal, 3>;

enum class SpectrogramOrigin { kMic, kAccel, kConverted };

std::string_view to_string(SpectrogramOrigin origin);
SpectrogramOrigin origin_from_string(std::string_view name);

/// Time x frequency power matrix. Storage is row-major over (column, bin):
/// the spectrum of column c occupies [c * bins, (c + 1) * bins).
///
/// Column c is centred at t0_s + c * col_step_s on the timeline of the signal
/// it was computed from; bin f is centred at f * bin_hz. ref_power is the
/// power a full-scale sinusoid centred on a bin would produce, which lets
/// downstream stages express bin power in dBFS.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t cols, std::size_t bins, double col_step_s, double bin_hz,
              SpectrogramOrigin origin);

  std::size_t cols() const noexcept { return cols_; }
  std::size_t bins() const noexcept { return bins_; }
  bool empty() const noexcept { return cols_ == 0 || bins_ == 0; }

  double& at(std::size_t col, std::size_t bin) noexcept { return mag_[col * bins_ + bin]; }
  double at(std::size_t col, std::size_t bin) const noexcept { return mag_[col * bins_ + bin]; }

  std::span<double> column(std::size_t col) noexcept {
    return {mag_.data() + col * bins_, bins_};
  }
  std::span<const double> column(std::size_t col) const noexcept {
    return {mag_.data() + col * bins_, bins_};
  }
  std::span<const double> data() const noexcept { return mag_; }
  std::span<double> data() noexcept { return mag_; }

  double col_step_s() const noexcept { return col_step_s_; }
  double bin_hz() const noexcept { return bin_hz_; }
  double t0_s() const noexcept { return t0_s_; }
  double ref_power() const noexcept { return ref_power_; }
  SpectrogramOrigin origin() const noexcept { return origin_; }

  double col_time_s(std::size_t col) const noexcept {
    return t0_s_ + static_cast<double>(col) * col_step_s_;
  }

  void set_col_step_s(double step) noexcept { col_step_s_ = step; }
  void set_t0_s(double t0) noexcept { t0_s_ = t0; }
  void set_ref_power(double ref) noexcept { ref_power_ = ref; }
  void set_origin(SpectrogramOrigin origin) noexcept { origin_ = origin; }

  /// Throws Error(kInvalidArgument) if any entry is negative or non-finite.
  void validate() const;

  friend bool operator==(const Spectrogram&, const Spectrogram&) = default;

 private:
  std::size_t cols_ = 0;
  std::size_t bins_ = 0;
  std::vector<double> mag_;
  double col_step_s_ = 0.0;
  double bin_hz_ = 0.0;
  double t0_s_ = 0.0;
  double ref_power_ = 1.0;
  SpectrogramOrigin origin_ = SpectrogramOrigin::kMic;
};

}  // namespace vibraverify
