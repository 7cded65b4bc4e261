// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vibraverify/signal.hpp"

namespace vibraverify {

enum class WavEncoding { kPcm16, kFloat32 };

// Mono RIFF/WAVE only; 16-bit PCM or 32-bit IEEE float, 8 kHz to 96 kHz.
// PCM16 decodes as v / 32768, so full scale maps to [-1, 32767/32768].
Signal load_wav(const std::filesystem::path& path);
Signal decode_wav(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_wav(const Signal& signal, WavEncoding encoding);
void write_wav(const std::filesystem::path& path, const Signal& signal, WavEncoding encoding);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace vibraverify
