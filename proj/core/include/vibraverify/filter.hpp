// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vibraverify {

/// Normalised biquad (a0 == 1), direct form II transposed.
struct Biquad {
  double b0, b1, b2, a1, a2;
};

using SosFilter = std::vector<Biquad>;

enum class FilterKind { kLowpass, kHighpass };

/// Digital Butterworth design via the bilinear transform with prewarping.
/// order must be even and positive; cutoff_hz must lie in (0, fs/2).
SosFilter design_butterworth(FilterKind kind, int order, double cutoff_hz, double sample_rate_hz);

/// Single causal pass with zero initial state.
std::vector<double> sos_filter(const SosFilter& sos, std::span<const double> x);

/// Zero-phase forward-backward filtering. The input is extended at both ends
/// by odd reflection and each pass starts from the step-response steady state
/// scaled by the first sample, which keeps the operation linear in x.
std::vector<double> filtfilt(const SosFilter& sos, std::span<const double> x);

/// Magnitude response of a single pass at frequency_hz.
double magnitude_response(const SosFilter& sos, double frequency_hz, double sample_rate_hz);

}  // namespace vibraverify
