// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "vibraverify/error.hpp"

namespace vibraverify {
namespace {

bool all_equal(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::kAccept ? "accept" : "reject";
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kLowSimilarity: return "low_similarity";
    case RejectReason::kEmptyAccel: return "empty_accel";
    case RejectReason::kEmptyMic: return "empty_mic";
  }
  return "low_similarity";
}

Spectrogram resample_columns(const Spectrogram& spec, double t0_s, double step_s,
                             std::size_t cols) {
  if (spec.empty()) throw Error(ErrorCode::kEmptySpectrogram, "cannot resample an empty spectrogram");
  Spectrogram out(cols, spec.bins(), step_s, spec.bin_hz(), spec.origin());
  out.set_t0_s(t0_s);
  out.set_ref_power(spec.ref_power());
  const double last = static_cast<double>(spec.cols() - 1);
  for (std::size_t j = 0; j < cols; ++j) {
    const double t = t0_s + static_cast<double>(j) * step_s;
    double pos = spec.col_step_s() > 0.0 ? (t - spec.t0_s()) / spec.col_step_s() : 0.0;
    pos = std::clamp(pos, 0.0, last);
    // snap positions that are integral up to rounding so identity resampling is exact
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-9) pos = nearest;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, spec.cols() - 1);
    const double frac = pos - static_cast<double>(lo);
    const auto a = spec.column(lo);
    const auto b = spec.column(hi);
    auto dst = out.column(j);
    for (std::size_t k = 0; k < spec.bins(); ++k) {
      dst[k] = frac == 0.0 ? a[k] : a[k] + frac * (b[k] - a[k]);
    }
  }
  return out;
}

Spectrogram interpolate_time(const Spectrogram& spec, std::size_t target_cols) {
  if (spec.empty()) throw Error(ErrorCode::kEmptySpectrogram, "cannot interpolate an empty spectrogram");
  if (target_cols < 2) throw Error(ErrorCode::kInvalidArgument, "target_cols must be at least 2");
  if (target_cols == spec.cols()) return spec;
  const double extent = static_cast<double>(spec.cols() - 1) * spec.col_step_s();
  const double step = spec.cols() > 1 ? extent / static_cast<double>(target_cols - 1)
                                      : spec.col_step_s();
  return resample_columns(spec, spec.t0_s(), step, target_cols);
}

Spectrogram normalize_2d(const Spectrogram& spec) {
  Spectrogram out = spec;
  for (std::size_t c = 0; c < out.cols(); ++c) {
    auto col = out.column(c);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double min = *lo;
    const double range = *hi - min;
    for (double& v : col) v = range > 0.0 ? (v - min) / range : 0.0;
  }
  return out;
}

double correlation(std::span<const double> a, std::span<const double> b, bool centered) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kShapeMismatch, "correlation inputs differ in size");
  }
  if (a.empty()) return 0.0;
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  if (centered) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      mean_a += a[i];
      mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;
  }
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    ab += da * db;
    aa += da * da;
    bb += db * db;
  }
  if (aa <= 0.0 || bb <= 0.0) return 0.0;
  if (centered && (all_equal(a) || all_equal(b))) return 0.0;
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

double corr2d(const Spectrogram& a, const Spectrogram& b, bool centered) {
  if (a.cols() != b.cols() || a.bins() != b.bins()) {
    throw Error(ErrorCode::kShapeMismatch, "corr2d needs equal shapes");
  }
  return correlation(a.data(), b.data(), centered);
}

SimilarityReport shift_corr(const Spectrogram& mic, const Spectrogram& accel,
                            const ShiftCorrOptions& options) {
  if (mic.bins() != accel.bins()) {
    throw Error(ErrorCode::kShapeMismatch, "spectrograms have different row counts");
  }
  const double step = mic.col_step_s();
  if (!(step > 0.0) || std::abs(accel.col_step_s() - step) > 1e-6 * step) {
    throw Error(ErrorCode::kShapeMismatch, "spectrograms have different column steps");
  }
  if (options.step_cols == 0) throw Error(ErrorCode::kInvalidArgument, "step_cols must be positive");

  const auto max_shift = static_cast<long>(std::floor(options.max_shift_s / step + 1e-9));
  // accel column aligned in time with mic column i is i + offset
  const long offset = std::lround((mic.t0_s() - accel.t0_s()) / step);
  const long mic_cols = static_cast<long>(mic.cols());
  const long acc_cols = static_cast<long>(accel.cols());
  const long first = std::max(0L, max_shift - offset);
  const long last = std::min(mic_cols, acc_cols - offset - max_shift);  // exclusive
  const long width = last - first;
  if (width < 4) {
    throw Error(ErrorCode::kWindowTooSmall,
                std::to_string(std::max(0L, width)) + " comparable columns; need at least 4");
  }

  const std::size_t bins = mic.bins();
  auto cols_span = [bins](const Spectrogram& s, long begin, long count) {
    return s.data().subspan(static_cast<std::size_t>(begin) * bins,
                            static_cast<std::size_t>(count) * bins);
  };
  const auto mic_window = cols_span(mic, first, width);

  SimilarityReport report;
  const long stride = static_cast<long>(options.step_cols);
  for (long s = -(max_shift / stride) * stride; s <= max_shift; s += stride) {
    const double c = correlation(mic_window, cols_span(accel, first + offset + s, width),
                                 options.centered);
    report.curve.push_back({static_cast<double>(s) * step, c});
  }

  // Visit shifts as 0, -1, +1, -2, +2, ... and keep strict improvements.
  std::vector<std::size_t> order(report.curve.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = report.curve[a].shift_s;
    const double sb = report.curve[b].shift_s;
    if (std::abs(sa) != std::abs(sb)) return std::abs(sa) < std::abs(sb);
    return sa < sb;
  });
  std::size_t best = order.front();
  for (std::size_t idx : order) {
    if (report.curve[idx].corr > report.curve[best].corr) best = idx;
  }
  report.peak_corr = report.curve[best].corr;
  report.best_shift_s = report.curve[best].shift_s;
  report.at_search_edge = report.curve.size() > 1 && (best == 0 || best + 1 == report.curve.size());

  const auto accel_region = cols_span(accel, first + offset - max_shift, width + 2 * max_shift);
  if (all_equal(accel_region)) {
    report.reject_reason = RejectReason::kEmptyAccel;
  } else if (all_equal(mic_window)) {
    report.reject_reason = RejectReason::kEmptyMic;
  } else if (report.peak_corr < options.eta) {
    report.reject_reason = RejectReason::kLowSimilarity;
  }
  report.verdict = report.reject_reason ? Verdict::kReject : Verdict::kAccept;
  return report;
}

}  // namespace vibraverify
