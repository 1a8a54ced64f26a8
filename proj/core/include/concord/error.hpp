#pragma once

#include <stdexcept>
#include <string>

namespace concord {

// Machine-readable reason attached to every concord::Error.  Callers that
// want to branch on the failure mode (the CLI does, to pick exit codes)
// should switch on code() rather than parse what().
enum class ErrorCode {
  // preference relation validation
  kNonSquareGrid,
  kOutOfRangeValue,
  kDiagonalConflict,
  kTooFewAlternatives,
  kEmptyRelation,
  kIndexOutOfRange,
  kDiagonalPair,
  // completion
  kUnestimable,
  // panel assembly
  kDimensionMismatch,
  kTooFewExperts,
  kEmptyList,
  // optimisation
  kInvalidParams,
  kShapeMismatch,
  // generation / serialisation
  kInfeasibleMask,
  kParseError,
  kIoError,
};

// Short stable identifier, e.g. "unestimable".  Useful in log lines and in
// the CLI's stderr output.
constexpr const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNonSquareGrid: return "non_square_grid";
    case ErrorCode::kOutOfRangeValue: return "out_of_range_value";
    case ErrorCode::kDiagonalConflict: return "diagonal_conflict";
    case ErrorCode::kTooFewAlternatives: return "too_few_alternatives";
    case ErrorCode::kEmptyRelation: return "empty_relation";
    case ErrorCode::kIndexOutOfRange: return "index_out_of_range";
    case ErrorCode::kDiagonalPair: return "diagonal_pair";
    case ErrorCode::kUnestimable: return "unestimable";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kTooFewExperts: return "too_few_experts";
    case ErrorCode::kEmptyList: return "empty_list";
    case ErrorCode::kInvalidParams: return "invalid_params";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kInfeasibleMask: return "infeasible_mask";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kIoError: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace concord
