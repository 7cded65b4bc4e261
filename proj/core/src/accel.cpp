// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/accel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "fft.hpp"
#include "vibraverify/error.hpp"

namespace vibraverify {
namespace {

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

double parse_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::kMalformedRow,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  }
  return value;
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

AccelTrace parse_accel_csv(std::string_view text) {
  AccelTrace trace;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim_cr(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!header_seen) {
      if (line != "t,x,y,z") {
        throw Error(ErrorCode::kMalformedRow, "expected header 't,x,y,z', got '" +
                                                  std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    double fields[4];
    std::size_t n = 0;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      if (n == 4) {
        throw Error(ErrorCode::kMalformedRow, "line " + std::to_string(line_no) + ": too many fields");
      }
      fields[n++] = parse_field(rest.substr(0, comma), line_no);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (n != 4) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    if (!trace.t.empty() && fields[0] < trace.t.back()) {
      throw Error(ErrorCode::kNonMonotonicTime,
                  "line " + std::to_string(line_no) + ": timestamp goes backwards");
    }
    trace.t.push_back(fields[0]);
    trace.x.push_back(fields[1]);
    trace.y.push_back(fields[2]);
    trace.z.push_back(fields[3]);
  }
  if (!header_seen) throw Error(ErrorCode::kMalformedRow, "missing header");
  if (trace.t.size() < 2) {
    throw Error(ErrorCode::kEmptyTrace, "need at least two samples to establish a rate");
  }

  std::vector<double> dt(trace.t.size() - 1);
  for (std::size_t i = 0; i + 1 < trace.t.size(); ++i) dt[i] = trace.t[i + 1] - trace.t[i];
  const auto mid = dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2);
  std::nth_element(dt.begin(), mid, dt.end());
  double median = *mid;
  if (dt.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(dt.begin(), mid));
  }
  if (!(median > 0.0)) {
    throw Error(ErrorCode::kNonMonotonicTime, "median timestamp spacing is zero");
  }
  trace.nominal_rate_hz = std::round(1.0 / median);
  if (trace.nominal_rate_hz <= 0.0) trace.nominal_rate_hz = 1.0 / median;
  return trace;
}

AccelTrace load_accel_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_accel_csv(ss.str());
}

std::string format_accel_csv(const AccelTrace& trace) {
  std::string out = "t,x,y,z\n";
  out.reserve(trace.size() * 64);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    append_number(out, trace.t[i]);
    out.push_back(',');
    append_number(out, trace.x[i]);
    out.push_back(',');
    append_number(out, trace.y[i]);
    out.push_back(',');
    append_number(out, trace.z[i]);
    out.push_back('\n');
  }
  return out;
}

void write_accel_csv(const std::filesystem::path& path, const AccelTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << format_accel_csv(trace);
}

AxisTriple regularize(const AccelTrace& trace) {
  if (trace.size() < 2) throw Error(ErrorCode::kEmptyTrace, "need at least two samples");
  trace.validate();

  const double rate = trace.nominal_rate_hz;
  const double t0 = trace.t.front();
  const double span = trace.t.back() - t0;
  const auto count = static_cast<std::size_t>(std::floor(span * rate + 1e-6)) + 1;
  constexpr double kSnap = 1e-6;

  std::array<std::vector<double>, 3> out;
  for (auto& axis : out) axis.resize(count);
  const std::array<const std::vector<double>*, 3> src{&trace.x, &trace.y, &trace.z};

  std::size_t i = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double tg = t0 + static_cast<double>(k) / rate;
    while (i + 2 < trace.size() && trace.t[i + 1] <= tg) ++i;
    const double ta = trace.t[i];
    const double tb = trace.t[i + 1];
    double frac = tb > ta ? (tg - ta) / (tb - ta) : 0.0;
    frac = std::clamp(frac, 0.0, 1.0);
    for (std::size_t a = 0; a < 3; ++a) {
      const double ya = (*src[a])[i];
      const double yb = (*src[a])[i + 1];
      if (frac < kSnap) {
        out[a][k] = ya;
      } else if (frac > 1.0 - kSnap) {
        out[a][k] = yb;
      } else {
        out[a][k] = ya + frac * (yb - ya);
      }
    }
  }
  return {Signal(std::move(out[0]), rate), Signal(std::move(out[1]), rate),
          Signal(std::move(out[2]), rate)};
}

double band_energy(const Signal& signal, double min_hz) {
  const std::size_t n = signal.size();
  if (n == 0) return 0.0;
  const auto s = signal.samples();
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centred(n);
  std::transform(s.begin(), s.end(), centred.begin(), [mean](double v) { return v - mean; });

  detail::RealFft fft(n);
  std::vector<std::complex<double>> spectrum(n / 2 + 1);
  fft.forward(centred, spectrum);
  const double bin_hz = signal.sample_rate_hz() / static_cast<double>(n);
  double energy = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (static_cast<double>(k) * bin_hz >= min_hz) energy += std::norm(spectrum[k]);
  }
  return energy;
}

std::size_t select_axis_index(const AxisTriple& axes, double min_hz) {
  std::size_t best = 0;
  double best_energy = band_energy(axes[0], min_hz);
  for (std::size_t a = 1; a < 3; ++a) {
    const double e = band_energy(axes[a], min_hz);
    if (e > best_energy) {
      best = a;
      best_energy = e;
    }
  }
  return best;
}

Signal select_axis(const AxisTriple& axes, double min_hz) {
  return axes[select_axis_index(axes, min_hz)];
}

}  // namespace vibraverify
