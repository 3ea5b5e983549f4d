#include "mop/fredholm.hpp"

#include <cmath>

#include "mop/error.hpp"
#include "mop/linalg.hpp"

namespace mop::numerics {

Eigen::MatrixXd nystrom_matrix(const KernelFunction& kernel, const QuadratureRule& rule) {
  const auto m = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd sw(m);
  for (Eigen::Index i = 0; i < m; ++i) sw(i) = std::sqrt(rule.weights[i]);
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      k(i, j) = sw(i) * kernel(rule.nodes[i], rule.nodes[j]) * sw(j);
  return k;
}

double fredholm_det(const KernelFunction& kernel, const QuadratureRule& rule) {
  Eigen::MatrixXd a = -nystrom_matrix(kernel, rule);
  a.diagonal().array() += 1.0;
  if (!a.allFinite())
    throw Error(ErrorCode::singular_discretization, "Nystrom matrix has non-finite entries");
  const double det = determinant(a);
  if (!std::isfinite(det))
    throw Error(ErrorCode::singular_discretization, "Nystrom determinant is not finite");
  return det;
}

double fredholm_det(const KernelFunction& kernel, double lo, double hi, int m) {
  if (m < 4) throw Error(ErrorCode::invalid_argument, "fredholm_det needs m >= 4");
  return fredholm_det(kernel, gauss_legendre(m, lo, hi));
}

}  // namespace mop::numerics
