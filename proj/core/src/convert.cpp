// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/convert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vibraverify/error.hpp"

namespace vibraverify {
namespace {

void check_input(const Spectrogram& mic, const ConversionParams& params) {
  params.validate();
  if (mic.origin() != SpectrogramOrigin::kMic) {
    throw Error(ErrorCode::kInvalidArgument, "conversion expects a microphone spectrogram");
  }
  if (!mic.empty() && params.output_bin_hz() < mic.bin_hz() / 2.0) {
    throw Error(ErrorCode::kGridMismatch,
                "output bin " + std::to_string(params.output_bin_hz()) +
                    " Hz is finer than half the microphone bin " + std::to_string(mic.bin_hz()) +
                    " Hz");
  }
}

Spectrogram empty_output(const Spectrogram& mic, const ConversionParams& params) {
  Spectrogram out(mic.cols(), params.target_bins, mic.col_step_s(), params.output_bin_hz(),
                  SpectrogramOrigin::kConverted);
  out.set_t0_s(mic.t0_s());
  out.set_ref_power(mic.ref_power());
  return out;
}

}  // namespace

int ConversionParams::effective_shift_range() const {
  if (n_shift_range > 0) return n_shift_range;
  return std::max(10, static_cast<int>(std::ceil(band_high_hz / f_ws_hz)));
}

void ConversionParams::validate() const {
  if (!(f_ws_hz > 0.0)) throw Error(ErrorCode::kInvalidArgument, "f_ws must be positive");
  if (!(band_low_hz < band_high_hz) || band_low_hz < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "conversion band must satisfy 0 <= low < high");
  }
  if (target_bins < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two target bins");
  if (n_shift_range < 0 ||
      (n_shift_range > 0 && n_shift_range < std::ceil(band_high_hz / f_ws_hz))) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_shift_range must be at least ceil(band_high / f_ws) = " +
                    std::to_string(static_cast<int>(std::ceil(band_high_hz / f_ws_hz))));
  }
}

double fold_frequency(double f_hz, double f_ws_hz) {
  const double r = std::fmod(f_hz, f_ws_hz);
  return std::min(r, f_ws_hz - r);
}

std::size_t folded_bin(double f_hz, const ConversionParams& params) {
  const double idx = std::floor(fold_frequency(f_hz, params.f_ws_hz) / params.output_bin_hz() + 0.5);
  return std::min(static_cast<std::size_t>(idx), params.target_bins - 1);
}

bool bin_selected(const Spectrogram& mic, std::size_t bin, double power,
                  const ConversionParams& params) {
  const double f = static_cast<double>(bin) * mic.bin_hz();
  if (f < params.band_low_hz || f > params.band_high_hz) return false;
  if (!params.amp_threshold_db) return true;
  if (!(power > 0.0)) return false;
  return 10.0 * std::log10(power / mic.ref_power()) >= *params.amp_threshold_db;
}

Spectrogram convert_spectrogram(const Spectrogram& mic, const ConversionParams& params) {
  check_input(mic, params);
  Spectrogram out = empty_output(mic, params);

  // Destination row depends only on the source bin.
  std::vector<std::size_t> dest(mic.bins());
  for (std::size_t m = 0; m < mic.bins(); ++m) {
    dest[m] = folded_bin(static_cast<double>(m) * mic.bin_hz(), params);
  }
  for (std::size_t c = 0; c < mic.cols(); ++c) {
    const auto src = mic.column(c);
    auto dst = out.column(c);
    for (std::size_t m = 0; m < src.size(); ++m) {
      if (bin_selected(mic, m, src[m], params)) dst[dest[m]] += src[m];
    }
  }
  return out;
}

Spectrogram convert_spectrogram_by_shift_search(const Spectrogram& mic,
                                                const ConversionParams& params) {
  check_input(mic, params);
  Spectrogram out = empty_output(mic, params);
  const int range = params.effective_shift_range();
  const double nyquist = params.f_ws_hz / 2.0;
  const double out_bin = params.output_bin_hz();

  for (std::size_t c = 0; c < mic.cols(); ++c) {
    for (std::size_t m = 0; m < mic.bins(); ++m) {
      const double f_mic = static_cast<double>(m) * mic.bin_hz();
      if (f_mic < params.band_low_hz || f_mic > params.band_high_hz) continue;
      const double power = mic.at(c, m);
      for (int shift = -range; shift <= range; ++shift) {
        const double f_w = std::abs(f_mic - shift * params.f_ws_hz);
        if (bin_selected(mic, m, power, params) && f_w <= nyquist && f_w > 0.0) {
          const auto row = static_cast<std::size_t>(std::floor(f_w / out_bin + 0.5));
          out.at(c, row) += power;
        }
      }
    }
  }
  return out;
}

}  // namespace vibraverify
