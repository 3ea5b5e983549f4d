#pragma once

#include <Eigen/Dense>

namespace mop::numerics {

// Determinant by partial-pivot LU. Non-finite input propagates as NaN.
double determinant(const Eigen::MatrixXd& a);

// 2-norm condition number from the singular values; +inf when singular.
double condition_number(const Eigen::MatrixXd& a);

}  // namespace mop::numerics
