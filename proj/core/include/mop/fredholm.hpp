#pragma once

#include <functional>

#include <Eigen/Dense>

#include "mop/quadrature.hpp"

namespace mop::numerics {

using KernelFunction = std::function<double(double, double)>;

// det(I - K) for the integral operator with kernel K on L^2(lo, hi), by
// Nystrom discretization on m Gauss-Legendre nodes: det(I - W^{1/2} K W^{1/2}).
// Throws singular-discretization if the Nystrom matrix is not finite.
double fredholm_det(const KernelFunction& kernel, double lo, double hi, int m);

// Same, on a caller-supplied rule.
double fredholm_det(const KernelFunction& kernel, const QuadratureRule& rule);

// The Nystrom matrix W^{1/2} K W^{1/2} itself.
Eigen::MatrixXd nystrom_matrix(const KernelFunction& kernel, const QuadratureRule& rule);

}  // namespace mop::numerics
