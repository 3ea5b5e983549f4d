#include "mop/error.hpp"

namespace mop {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_interval: return "invalid-interval";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::invalid_order: return "invalid-order";
    case ErrorCode::non_hermitian_input: return "non-hermitian-input";
    case ErrorCode::singular_discretization: return "singular-discretization";
    case ErrorCode::out_of_support: return "out-of-support";
    case ErrorCode::non_sorted_input: return "non-sorted-input";
    case ErrorCode::non_unique_mop: return "non-unique-mop";
    case ErrorCode::singular_gram: return "singular-gram";
    case ErrorCode::contour_truncation_insufficient: return "contour-truncation-insufficient";
    case ErrorCode::non_confining_potential: return "non-confining-potential";
    case ErrorCode::infeasible_masses: return "infeasible-masses";
    case ErrorCode::odd_n: return "odd-n";
    case ErrorCode::time_out_of_range: return "time-out-of-range";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::insufficient_samples: return "insufficient-samples";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

bool is_numerical_degeneracy(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::singular_discretization:
    case ErrorCode::non_unique_mop:
    case ErrorCode::singular_gram:
    case ErrorCode::contour_truncation_insufficient:
      return true;
    default:
      return false;
  }
}

}  // namespace mop
