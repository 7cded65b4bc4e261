// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/error.hpp"

namespace vibraverify {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kNonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::kEmptyTrace: return "EmptyTrace";
    case ErrorCode::kCutoffAboveNyquist: return "CutoffAboveNyquist";
    case ErrorCode::kInvalidBand: return "InvalidBand";
    case ErrorCode::kNoCommandDetected: return "NoCommandDetected";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kEmptySpectrogram: return "EmptySpectrogram";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kWindowTooSmall: return "WindowTooSmall";
    case ErrorCode::kRateTooLow: return "RateTooLow";
    case ErrorCode::kUnknownWordId: return "UnknownWordId";
    case ErrorCode::kSingleClassOnly: return "SingleClassOnly";
    case ErrorCode::kProtocol: return "Protocol";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace vibraverify
