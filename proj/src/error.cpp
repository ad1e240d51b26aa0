// SPDX-License-Identifier: Apache-2.0
#include "bldmap/error.hpp"

namespace bldmap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadSignature: return "BadSignature";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnsupportedPointFormat: return "UnsupportedPointFormat";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NoPointsInGrid: return "NoPointsInGrid";
    case ErrorCode::BadKernel: return "BadKernel";
    case ErrorCode::DegenerateScene: return "DegenerateScene";
    case ErrorCode::NoGround: return "NoGround";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::DegenerateOccupancy: return "DegenerateOccupancy";
    case ErrorCode::EmptyTruth: return "EmptyTruth";
    case ErrorCode::OpenRing: return "OpenRing";
    case ErrorCode::SelfIntersection: return "SelfIntersection";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace bldmap
