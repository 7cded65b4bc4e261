// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "vibraverify/signal.hpp"

namespace vibraverify {

// Accelerometer CSV: UTF-8, header line `t,x,y,z`, '.' decimal point, '\n'
// line endings, t in seconds. nominal_rate_hz = round(1 / median(dt)).
AccelTrace parse_accel_csv(std::string_view text);
AccelTrace load_accel_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal formatting, so load(format(trace)) is exact.
std::string format_accel_csv(const AccelTrace& trace);
void write_accel_csv(const std::filesystem::path& path, const AccelTrace& trace);

/// Linear resampling of every axis onto t0 + k / nominal_rate_hz. Grid points
/// that coincide with a timestamp take that sample unchanged, so uniform
/// input passes through bit-exactly.
AxisTriple regularize(const AccelTrace& trace);

/// Index (0 = x, 1 = y, 2 = z) of the axis with the most spectral energy
/// between min_hz and Nyquist after mean removal; ties resolve x, then y, then z.
std::size_t select_axis_index(const AxisTriple& axes, double min_hz = 30.0);
Signal select_axis(const AxisTriple& axes, double min_hz = 30.0);

/// Spectral energy of the mean-removed signal at or above min_hz.
double band_energy(const Signal& signal, double min_hz);

}  // namespace vibraverify
