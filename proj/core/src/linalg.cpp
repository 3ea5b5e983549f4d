#include "mop/linalg.hpp"

#include <limits>

namespace mop::numerics {

double determinant(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 1.0;
  if (a.rows() == 1) return a(0, 0);
  if (a.rows() == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant();
}

double condition_number(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace mop::numerics
