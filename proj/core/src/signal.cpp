// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vibraverify/error.hpp"

namespace vibraverify {

Signal::Signal(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  const auto bad = std::find_if(samples_.begin(), samples_.end(),
                                [](double v) { return !std::isfinite(v); });
  if (bad != samples_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "non-finite sample at index " + std::to_string(bad - samples_.begin()));
  }
}

Signal Signal::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, samples_.size());
  begin = std::min(begin, end);
  return Signal(std::vector<double>(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                                    samples_.begin() + static_cast<std::ptrdiff_t>(end)),
                sample_rate_hz_);
}

void AccelTrace::validate() const {
  if (t.empty()) throw Error(ErrorCode::kEmptyTrace, "accelerometer trace has no samples");
  if (x.size() != t.size() || y.size() != t.size() || z.size() != t.size()) {
    throw Error(ErrorCode::kInvalidArgument, "accelerometer columns differ in length");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] < t[i - 1]) {
      throw Error(ErrorCode::kNonMonotonicTime,
                  "timestamp decreases at row " + std::to_string(i));
    }
  }
  if (!(nominal_rate_hz > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "nominal rate must be positive");
  }
}

std::string_view to_string(SpectrogramOrigin origin) {
  switch (origin) {
    case SpectrogramOrigin::kMic: return "mic";
    case SpectrogramOrigin::kAccel: return "accel";
    case SpectrogramOrigin::kConverted: return "converted";
  }
  return "mic";
}

SpectrogramOrigin origin_from_string(std::string_view name) {
  if (name == "mic") return SpectrogramOrigin::kMic;
  if (name == "accel") return SpectrogramOrigin::kAccel;
  if (name == "converted") return SpectrogramOrigin::kConverted;
  throw Error(ErrorCode::kInvalidArgument, "unknown spectrogram origin '" + std::string(name) + "'");
}

Spectrogram::Spectrogram(std::size_t cols, std::size_t bins, double col_step_s, double bin_hz,
                         SpectrogramOrigin origin)
    : cols_(cols),
      bins_(bins),
      mag_(cols * bins, 0.0),
      col_step_s_(col_step_s),
      bin_hz_(bin_hz),
      origin_(origin) {}

void Spectrogram::validate() const {
  for (std::size_t i = 0; i < mag_.size(); ++i) {
    if (!(mag_[i] >= 0.0) || !std::isfinite(mag_[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "spectrogram entry " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

}  // namespace vibraverify
