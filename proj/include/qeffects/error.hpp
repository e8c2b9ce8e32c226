#pragma once

#include <stdexcept>
#include <string>

namespace qeffects {

enum class ErrorCode {
  InvalidArgument,
  NotHermitian,
  DidNotConverge,
  NotPSD,
  DimensionMismatch,
  InvalidFamily,
  InvalidEffect,
  NotAlmostSharp,
  FormulaMismatch,
  NotInAlgebra,
  NotCommuting,
  HypothesisFailed,
  RangeViolation,
  InvalidClassCombination,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code identifies which contract
// was violated so callers (the CLI, the Python bindings) can map it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qeffects
