#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mop {

enum class ErrorCode {
  invalid_argument,
  invalid_interval,
  out_of_range,
  domain_error,
  invalid_order,
  non_hermitian_input,
  singular_discretization,
  out_of_support,
  non_sorted_input,
  non_unique_mop,
  singular_gram,
  contour_truncation_insufficient,
  non_confining_potential,
  infeasible_masses,
  odd_n,
  time_out_of_range,
  empty_input,
  insufficient_samples,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for failures caused by the numerics rather than by the caller's input.
bool is_numerical_degeneracy(ErrorCode code) noexcept;

}  // namespace mop
