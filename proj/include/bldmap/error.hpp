// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bldmap {

enum class ErrorCode {
  BadSignature,
  UnsupportedVersion,
  UnsupportedPointFormat,
  Truncated,
  EmptyCloud,
  ParseError,
  NoPointsInGrid,
  BadKernel,
  DegenerateScene,
  NoGround,
  SpecMismatch,
  DegenerateOccupancy,
  EmptyTruth,
  OpenRing,
  SelfIntersection,
  MalformedHeader,
  ShapeMismatch,
  IoFailure,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's exit-code mapping) can dispatch on kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace bldmap
