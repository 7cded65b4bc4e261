// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace vibraverify::detail {

/// Owning wrapper over an FFTW real-to-complex plan of fixed length. Plan
/// creation is serialised internally; each instance owns its buffers so
/// distinct instances may execute concurrently.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// in.size() == n; out.size() == n / 2 + 1.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);

 private:
  std::size_t n_;
  double* in_ = nullptr;
  void* out_ = nullptr;  // fftw_complex*
  void* plan_ = nullptr;  // fftw_plan
};

}  // namespace vibraverify::detail
