#include "qeffects/error.hpp"

namespace qeffects {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidFamily: return "InvalidFamily";
    case ErrorCode::InvalidEffect: return "InvalidEffect";
    case ErrorCode::NotAlmostSharp: return "NotAlmostSharp";
    case ErrorCode::FormulaMismatch: return "FormulaMismatch";
    case ErrorCode::NotInAlgebra: return "NotInAlgebra";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::InvalidClassCombination: return "InvalidClassCombination";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace qeffects
