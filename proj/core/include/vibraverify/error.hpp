// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vibraverify {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  // audio / accelerometer ingestion
  kUnsupportedFormat,
  kCorruptHeader,
  kMalformedRow,
  kNonMonotonicTime,
  kEmptyTrace,
  // preprocessing
  kCutoffAboveNyquist,
  kInvalidBand,
  kNoCommandDetected,
  // spectrogram pipeline
  kSignalTooShort,
  kGridMismatch,
  kEmptySpectrogram,
  kShapeMismatch,
  kWindowTooSmall,
  // simulation / evaluation
  kRateTooLow,
  kUnknownWordId,
  kSingleClassOnly,
  kProtocol,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the service) can map it to an exit status or reason.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vibraverify
