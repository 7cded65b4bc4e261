// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/spectro.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include "vibraverify/audio_io.hpp"
#include "fft.hpp"
#include "json.hpp"
#include "vibraverify/error.hpp"

namespace vibraverify {

std::string_view to_string(WindowKind kind) {
  return kind == WindowKind::kHann ? "hann" : "rect";
}

WindowKind window_from_string(std::string_view name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "rect") return WindowKind::kRect;
  throw Error(ErrorCode::kInvalidArgument, "unknown window '" + std::string(name) + "'");
}

void StftParams::validate() const {
  if (n_fft == 0 || (n_fft & (n_fft - 1)) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_fft must be a power of two");
  }
  if (hop == 0 || hop > n_fft) {
    throw Error(ErrorCode::kInvalidArgument, "hop must satisfy 0 < hop <= n_fft");
  }
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::kHann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n));
    }
  }
  return w;
}

Spectrogram stft_power(const Signal& signal, const StftParams& params, SpectrogramOrigin origin) {
  params.validate();
  const std::size_t n = params.n_fft;
  if (signal.size() < n) {
    throw Error(ErrorCode::kSignalTooShort, std::to_string(signal.size()) +
                                                " samples is shorter than n_fft " +
                                                std::to_string(n));
  }
  const double fs = signal.sample_rate_hz();
  const std::size_t cols = (signal.size() - n) / params.hop + 1;
  const std::size_t bins = n / 2 + 1;

  Spectrogram spec(cols, bins, static_cast<double>(params.hop) / fs,
                   fs / static_cast<double>(n), origin);
  spec.set_t0_s(static_cast<double>(n) / (2.0 * fs));

  const auto window = make_window(params.window, n);
  const double coherent = std::accumulate(window.begin(), window.end(), 0.0) / 2.0;
  spec.set_ref_power(coherent * coherent);

  detail::RealFft fft(n);
  std::vector<double> frame(n);
  std::vector<std::complex<double>> spectrum(bins);
  const auto x = signal.samples();
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t offset = c * params.hop;
    for (std::size_t i = 0; i < n; ++i) frame[i] = x[offset + i] * window[i];
    fft.forward(frame, spectrum);
    auto column = spec.column(c);
    for (std::size_t k = 0; k < bins; ++k) column[k] = std::norm(spectrum[k]);
  }
  return spec;
}

std::size_t column_argmax(const Spectrogram& spec, std::size_t col) {
  const auto column = spec.column(col);
  std::size_t best = 0;
  for (std::size_t k = 1; k < column.size(); ++k) {
    if (column[k] > column[best]) best = k;
  }
  return best;
}

std::vector<SweepPoint> sweep_curve(const Spectrogram& spec) {
  constexpr double kSilent = 1e-12;
  std::vector<SweepPoint> curve;
  curve.reserve(spec.cols());
  for (std::size_t c = 0; c < spec.cols(); ++c) {
    SweepPoint p;
    p.time_s = spec.col_time_s(c);
    const std::size_t k = column_argmax(spec, c);
    if (spec.bins() > 0 && spec.at(c, k) >= kSilent) {
      p.peak_hz = static_cast<double>(k) * spec.bin_hz();
    }
    curve.push_back(p);
  }
  return curve;
}

std::vector<std::uint8_t> encode_spectrogram_dump(const Spectrogram& spec) {
  nlohmann::json header = {{"cols", spec.cols()},
                           {"rows", spec.bins()},
                           {"col_step_s", spec.col_step_s()},
                           {"bin_hz", spec.bin_hz()},
                           {"origin", std::string(to_string(spec.origin()))}};
  const std::string line = header.dump() + "\n";
  std::vector<std::uint8_t> out(line.begin(), line.end());
  out.reserve(out.size() + spec.data().size() * 4);
  for (double v : spec.data()) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int shift = 0; shift < 32; shift += 8) {
      out.push_back(static_cast<std::uint8_t>(bits >> shift));
    }
  }
  return out;
}

Spectrogram decode_spectrogram_dump(std::span<const std::uint8_t> bytes) {
  std::size_t nl = 0;
  while (nl < bytes.size() && bytes[nl] != '\n') ++nl;
  if (nl == bytes.size()) throw Error(ErrorCode::kCorruptHeader, "dump header line missing");
  std::size_t cols = 0;
  std::size_t rows = 0;
  Spectrogram spec;
  try {
    const auto header =
        nlohmann::json::parse(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(nl));
    cols = header.at("cols").get<std::size_t>();
    rows = header.at("rows").get<std::size_t>();
    spec = Spectrogram(cols, rows, header.at("col_step_s").get<double>(),
                       header.at("bin_hz").get<double>(),
                       origin_from_string(header.at("origin").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptHeader, std::string("dump header: ") + e.what());
  }
  const auto payload = bytes.subspan(nl + 1);
  if (payload.size() != cols * rows * 4) {
    throw Error(ErrorCode::kCorruptHeader, "dump payload size does not match header");
  }
  auto data = spec.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(payload[i * 4 + b]) << (8 * b);
    data[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return spec;
}

void write_spectrogram_dump(const std::filesystem::path& path, const Spectrogram& spec) {
  write_file_bytes(path, encode_spectrogram_dump(spec));
}

}  // namespace vibraverify
