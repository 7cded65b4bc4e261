// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "vibraverify/error.hpp"

namespace vibraverify {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;
constexpr double kMinRate = 8000.0;
constexpr double kMaxRate = 96000.0;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

Signal decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw Error(ErrorCode::kCorruptHeader, "missing RIFF/WAVE signature");
  }

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      throw Error(ErrorCode::kCorruptHeader, "chunk extends past end of file");
    }
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) throw Error(ErrorCode::kCorruptHeader, "fmt chunk too short");
      FormatChunk f;
      f.format = read_u16(bytes, body);
      f.channels = read_u16(bytes, body + 2);
      f.rate = read_u32(bytes, body + 4);
      f.block_align = read_u16(bytes, body + 12);
      f.bits = read_u16(bytes, body + 14);
      if (f.format == kFormatExtensible) {
        if (size < 40) throw Error(ErrorCode::kCorruptHeader, "extensible fmt chunk too short");
        f.format = read_u16(bytes, body + 24);  // first two bytes of the subformat GUID
      }
      fmt = f;
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, size);
    }
    pos = body + size + (size & 1u);
  }

  if (!fmt) throw Error(ErrorCode::kCorruptHeader, "no fmt chunk");
  if (!data) throw Error(ErrorCode::kCorruptHeader, "no data chunk");
  if (fmt->channels != 1) {
    throw Error(ErrorCode::kUnsupportedFormat,
                std::to_string(fmt->channels) + " channels; only mono is supported");
  }
  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool f32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !f32) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "format " + std::to_string(fmt->format) + " with " + std::to_string(fmt->bits) +
                    " bits; expected PCM16 or float32");
  }
  if (fmt->block_align != fmt->bits / 8) {
    throw Error(ErrorCode::kCorruptHeader, "block align does not match sample width");
  }
  if (fmt->rate < kMinRate || fmt->rate > kMaxRate) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "sample rate " + std::to_string(fmt->rate) + " outside 8000..96000 Hz");
  }

  const std::size_t width = fmt->bits / 8;
  const std::size_t n = data->size() / width;
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pcm16) {
      const auto raw = static_cast<std::int16_t>(read_u16(*data, i * width));
      samples[i] = static_cast<double>(raw) / 32768.0;
    } else {
      const float v = std::bit_cast<float>(read_u32(*data, i * width));
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kCorruptHeader, "non-finite float sample at " + std::to_string(i));
      }
      samples[i] = static_cast<double>(v);
    }
  }
  return Signal(std::move(samples), static_cast<double>(fmt->rate));
}

Signal load_wav(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const Signal& signal, WavEncoding encoding) {
  const double rate = std::round(signal.sample_rate_hz());
  if (rate < kMinRate || rate > kMaxRate || rate != signal.sample_rate_hz()) {
    throw Error(ErrorCode::kUnsupportedFormat, "WAV needs an integer rate in 8000..96000 Hz");
  }
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t format = encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat;
  const std::uint16_t block = bits / 8;
  const auto data_bytes = static_cast<std::uint32_t>(signal.size() * block);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(rate));
  put_u32(out, static_cast<std::uint32_t>(rate) * block);
  put_u16(out, block);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double v : signal.samples()) {
    if (encoding == WavEncoding::kPcm16) {
      const double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Signal& signal, WavEncoding encoding) {
  write_file_bytes(path, encode_wav(signal, encoding));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace vibraverify
