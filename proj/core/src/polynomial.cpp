#include "mop/polynomial.hpp"

namespace mop {

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double s = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) s = s * x + *it;
  return s;
}

double Polynomial::derivative(double x) const {
  double s = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) s = s * x + static_cast<double>(k) * coeffs_[k];
  return s;
}

bool Polynomial::is_even() const noexcept {
  for (std::size_t k = 1; k < coeffs_.size(); k += 2)
    if (coeffs_[k] != 0.0) return false;
  return true;
}

bool Polynomial::is_confining() const noexcept {
  return degree() >= 2 && degree() % 2 == 0 && leading() > 0.0;
}

}  // namespace mop
