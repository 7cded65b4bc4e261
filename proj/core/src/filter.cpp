// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "vibraverify/error.hpp"

namespace vibraverify {
namespace {

struct State {
  double z1 = 0.0;
  double z2 = 0.0;
};

// Per-section state that a constant unit input settles into. The input to
// section i is the DC gain of sections 0..i-1.
std::vector<State> steady_state(const SosFilter& sos) {
  std::vector<State> zi(sos.size());
  double input = 1.0;
  for (std::size_t i = 0; i < sos.size(); ++i) {
    const auto& s = sos[i];
    const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double y = gain * input;
    zi[i].z1 = y - s.b0 * input;
    zi[i].z2 = s.b2 * input - s.a2 * y;
    input = y;
  }
  return zi;
}

void run(const SosFilter& sos, std::vector<double>& x, std::vector<State> state) {
  for (std::size_t i = 0; i < sos.size(); ++i) {
    const auto& s = sos[i];
    auto& st = state[i];
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + st.z1;
      st.z1 = s.b1 * in - s.a1 * out + st.z2;
      st.z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

std::vector<State> scaled(const std::vector<State>& zi, double k) {
  std::vector<State> out(zi);
  for (auto& st : out) {
    st.z1 *= k;
    st.z2 *= k;
  }
  return out;
}

}  // namespace

SosFilter design_butterworth(FilterKind kind, int order, double cutoff_hz, double sample_rate_hz) {
  if (order <= 0 || order % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "Butterworth order must be even and positive");
  }
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
    throw Error(ErrorCode::kCutoffAboveNyquist, "cutoff must lie strictly inside (0, fs/2)");
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  const double k2 = k * k;
  SosFilter sos;
  for (int i = 1; i <= order / 2; ++i) {
    // damping of the i-th conjugate pole pair of the analog prototype
    const double q = 2.0 * std::sin(std::numbers::pi * (2.0 * i - 1.0) / (2.0 * order));
    const double norm = 1.0 / (1.0 + q * k + k2);
    Biquad b{};
    if (kind == FilterKind::kLowpass) {
      b.b0 = k2 * norm;
      b.b1 = 2.0 * b.b0;
      b.b2 = b.b0;
    } else {
      b.b0 = norm;
      b.b1 = -2.0 * norm;
      b.b2 = norm;
    }
    b.a1 = 2.0 * (k2 - 1.0) * norm;
    b.a2 = (1.0 - q * k + k2) * norm;
    sos.push_back(b);
  }
  return sos;
}

std::vector<double> sos_filter(const SosFilter& sos, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  run(sos, y, std::vector<State>(sos.size()));
  return y;
}

std::vector<double> filtfilt(const SosFilter& sos, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0 || sos.empty()) return {x.begin(), x.end()};

  const std::size_t pad = std::min<std::size_t>(3 * (2 * sos.size() + 1), n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto zi = steady_state(sos);
  run(sos, ext, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());
  run(sos, ext, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

double magnitude_response(const SosFilter& sos, double frequency_hz, double sample_rate_hz) {
  const double w = 2.0 * std::numbers::pi * frequency_hz / sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h = 1.0;
  for (const auto& s : sos) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return std::abs(h);
}

}  // namespace vibraverify
