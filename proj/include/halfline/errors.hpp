#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halfline {

enum class ErrorCode {
  InvalidArgument,
  NonConverged,
  StepUnderflow,
  SmallZeta,
  XMaxTooSmall,
  Inconsistent,
  DecayTooWeak,
  GridTooCoarse,
  AtEigenvalue,
  CountMismatch,
  BracketFail,
  NotNearInteger,
  OrderTooHigh,
  TailNotConverged,
  CaseUndetermined,
  RealityViolation,
};

std::string_view to_string(ErrorCode code);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw SolverError(code, what);
}

}  // namespace halfline
