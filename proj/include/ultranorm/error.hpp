#pragma once

#include <stdexcept>
#include <string>

namespace ultranorm {

enum class ErrorCode {
  parse,
  dimension_mismatch,
  field_mismatch,
  singular_matrix,
  mode,
  invalid_p,
  t_out_of_range,
  t_negative,
  t_non_positive,
  zero_vector,
  zero_generator,
  k_out_of_range,
  non_integer_weights,
  invalid_degree,
  domain,
  shape,
  invalid_argument,
  internal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::field_mismatch: return "FieldMismatch";
    case ErrorCode::singular_matrix: return "SingularMatrix";
    case ErrorCode::mode: return "ModeError";
    case ErrorCode::invalid_p: return "InvalidP";
    case ErrorCode::t_out_of_range: return "TOutOfRange";
    case ErrorCode::t_negative: return "TNegative";
    case ErrorCode::t_non_positive: return "TNonPositive";
    case ErrorCode::zero_vector: return "ZeroVector";
    case ErrorCode::zero_generator: return "ZeroGenerator";
    case ErrorCode::k_out_of_range: return "KOutOfRange";
    case ErrorCode::non_integer_weights: return "NonIntegerWeights";
    case ErrorCode::invalid_degree: return "InvalidDegree";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::shape: return "ShapeError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::internal: return "InternalError";
  }
  return "Error";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ultranorm
