// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <cmath>
#include <exception>
#include <numbers>

namespace vvtest {

Signal tone(double freq_hz, double amplitude, double duration_s, double sample_rate_hz,
            double phase) {
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude *
           std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / sample_rate_hz + phase);
  }
  return Signal(std::move(x), sample_rate_hz);
}

Signal silence(double duration_s, double sample_rate_hz) {
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  return Signal(std::vector<double>(n, 0.0), sample_rate_hz);
}

Signal concat(const std::vector<Signal>& parts) {
  std::vector<double> x;
  for (const auto& p : parts) x.insert(x.end(), p.samples().begin(), p.samples().end());
  return Signal(std::move(x), parts.front().sample_rate_hz());
}

Signal add(const Signal& a, const Signal& b) {
  std::vector<double> x(a.samples().begin(), a.samples().end());
  for (std::size_t i = 0; i < x.size() && i < b.size(); ++i) x[i] += b[i];
  return Signal(std::move(x), a.sample_rate_hz());
}

Signal scale(const Signal& s, double gain) {
  std::vector<double> x(s.samples().begin(), s.samples().end());
  for (double& v : x) v *= gain;
  return Signal(std::move(x), s.sample_rate_hz());
}

Signal white_noise(double rms, double duration_s, double sample_rate_hz, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  std::vector<double> x(n);
  for (double& v : x) v = rms * rng.normal();
  return Signal(std::move(x), sample_rate_hz);
}

Signal chirp(double f0_hz, double f1_hz, double amplitude, double duration_s, double sample_rate_hz) {
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  const double rate = (f1_hz - f0_hz) / duration_s;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * (f0_hz * t + 0.5 * rate * t * t));
  }
  return Signal(std::move(x), sample_rate_hz);
}

double tone_amplitude(const Signal& s, double freq_hz, std::size_t skip) {
  double cc = 0.0, ss = 0.0, cs = 0.0, xc = 0.0, xs = 0.0;
  for (std::size_t i = skip; i + skip < s.size(); ++i) {
    const double w = 2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / s.sample_rate_hz();
    const double c = std::cos(w);
    const double n = std::sin(w);
    cc += c * c;
    ss += n * n;
    cs += c * n;
    xc += s[i] * c;
    xs += s[i] * n;
  }
  const double det = cc * ss - cs * cs;
  const double a = (xc * ss - xs * cs) / det;
  const double b = (xs * cc - xc * cs) / det;
  return std::hypot(a, b);
}

double relative_error(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

PropertyResult check_property(const std::string& name, std::size_t cases, std::uint64_t seed,
                              const std::function<std::optional<std::string>(Rng&)>& body) {
  PropertyResult result{name, cases, 0, {}};
  for (std::size_t i = 0; i < cases; ++i) {
    const std::uint64_t case_seed = vibraverify::mix_seed(seed, i);
    Rng rng(case_seed);
    std::optional<std::string> failure;
    try {
      failure = body(rng);
    } catch (const std::exception& e) {
      failure = std::string("threw: ") + e.what();
    }
    if (failure) {
      if (result.failures == 0) {
        result.first_failure = "case " + std::to_string(i) + " (seed " + std::to_string(case_seed) +
                               "): " + *failure;
      }
      ++result.failures;
    }
  }
  return result;
}

}  // namespace vvtest
