#include "halfline/errors.hpp"

namespace halfline {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::NonConverged: return "NON_CONVERGED";
    case ErrorCode::StepUnderflow: return "STEP_UNDERFLOW";
    case ErrorCode::SmallZeta: return "SMALL_ZETA";
    case ErrorCode::XMaxTooSmall: return "X_MAX_TOO_SMALL";
    case ErrorCode::Inconsistent: return "INCONSISTENT";
    case ErrorCode::DecayTooWeak: return "DECAY_TOO_WEAK";
    case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::AtEigenvalue: return "AT_EIGENVALUE";
    case ErrorCode::CountMismatch: return "COUNT_MISMATCH";
    case ErrorCode::BracketFail: return "BRACKET_FAIL";
    case ErrorCode::NotNearInteger: return "NOT_NEAR_INTEGER";
    case ErrorCode::OrderTooHigh: return "ORDER_TOO_HIGH";
    case ErrorCode::TailNotConverged: return "TAIL_NOT_CONVERGED";
    case ErrorCode::CaseUndetermined: return "CASE_UNDETERMINED";
    case ErrorCode::RealityViolation: return "REALITY_VIOLATION";
  }
  return "UNKNOWN";
}

}  // namespace halfline
