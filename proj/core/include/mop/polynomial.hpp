#pragma once

#include <vector>

namespace mop {

// Real polynomial in the power basis, coefficients in ascending degree
// ("0,0,0.5" is x^2/2). Trailing zeros are trimmed on construction.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);

  double operator()(double x) const;
  double derivative(double x) const;

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  bool is_even() const noexcept;
  // Even degree with a positive leading coefficient.
  bool is_confining() const noexcept;

 private:
  std::vector<double> coeffs_;
};

}  // namespace mop
