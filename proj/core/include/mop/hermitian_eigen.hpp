#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mop::numerics {

// Dense Hermitian matrix, row-major. Construction does not check symmetry;
// hermitian_eigenvalues does.
class HermitianMatrix {
 public:
  using value_type = std::complex<double>;

  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t order) : order_(order), data_(order * order) {}

  std::size_t order() const noexcept { return order_; }

  value_type& operator()(std::size_t row, std::size_t col) { return data_[row * order_ + col]; }
  const value_type& operator()(std::size_t row, std::size_t col) const {
    return data_[row * order_ + col];
  }

  // Largest |a_jk - conj(a_kj)| over the matrix.
  double asymmetry() const;

  std::vector<value_type>& data() noexcept { return data_; }
  const std::vector<value_type>& data() const noexcept { return data_; }

 private:
  std::size_t order_ = 0;
  std::vector<value_type> data_;
};

inline constexpr double hermitian_tolerance = 1e-14;

// Ascending eigenvalues. Householder reduction to a Hermitian tridiagonal, a
// diagonal unitary similarity to make it real symmetric, then implicit-shift
// QL. Throws non-hermitian-input when asymmetry exceeds
// hermitian_tolerance * max(1, max |a_jk|).
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m);

// Eigenvalues of the real symmetric tridiagonal matrix (diag, offdiag), where
// offdiag[i] couples rows i and i+1. Ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> offdiag);

}  // namespace mop::numerics
