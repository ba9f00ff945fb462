#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lipfree {

enum class ErrorCode {
  not_square,
  duplicate_label,
  not_symmetric,
  nonzero_diagonal,
  negative_or_zero_off_diagonal,
  triangle_violation,
  unknown_base,
  alpha_out_of_range,
  inexact_power,
  unknown_label,
  equal_points,
  space_mismatch,
  solver_failure,
  not_a_line_space,
  partial_constant_exceeds_l,
  not_monotone,
  moduli_hypothesis_violated,
  overlapping_intervals,
  base_not_preserved,
  not_composable,
  dimension_too_large_for_exact,
  stage_too_large,
  width_overflow,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every lipfree operation. `witness` names the
/// offending labels (a pair, a triple, ...) when the error has one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::string> witness = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        witness_(std::move(witness)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::vector<std::string> witness_;
};

}  // namespace lipfree
