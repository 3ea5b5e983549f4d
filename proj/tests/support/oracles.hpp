#pragma once

// Reference computations used by the unit and acceptance tests. Each one is
// deliberately naive and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

inline double semicircle(double x) {
  return std::abs(x) >= 2.0 ? 0.0 : std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

inline double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + (x * std::sqrt(4.0 - x * x) / 4.0 + std::asin(x / 2.0)) / std::numbers::pi;
}

inline double sine(double x, double y) {
  const double d = x - y;
  if (d == 0.0) return 1.0;
  return std::sin(std::numbers::pi * d) / (std::numbers::pi * d);
}

// Monic orthogonal polynomial of degree d for the weight e^{-x^2}, from the
// Hankel moment system in long double. Ascending coefficients.
inline std::vector<double> gaussian_monic_by_moments(int d) {
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  auto moment = [](int k) -> long double {
    if (k % 2) return 0.0L;
    return std::tgamma(static_cast<long double>(k + 1) / 2.0L);
  };
  if (d == 0) return {1.0};
  Mat H(d, d);
  Vec rhs(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) H(i, j) = moment(i + j);
    rhs(i) = -moment(i + d);
  }
  const Vec c = H.fullPivLu().solve(rhs);
  std::vector<double> out(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i < d; ++i) out[i] = static_cast<double>(c(i));
  out[d] = 1.0;
  return out;
}

// Monic Hermite polynomials H_d / 2^d by x h_k = h_{k+1} + (k/2) h_{k-1}.
inline std::vector<double> monic_hermite(int d) {
  std::vector<double> prev{1.0}, cur{1.0};
  if (d == 0) return cur;
  cur = {0.0, 1.0};
  for (int k = 1; k < d; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k) + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= 0.5 * k * prev[i];
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double brownian(double t, double x, double y) {
  return std::exp(-(x - y) * (x - y) / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

// Squared Bessel process of index alpha (dimension 2 alpha + 2).
inline double besq(double alpha, double t, double x, double y) {
  return std::pow(y / x, alpha / 2.0) * std::exp(-(x + y) / (2.0 * t)) *
         boost::math::cyl_bessel_i(alpha, std::sqrt(x * y) / t) / (2.0 * t);
}

// Karlin-McGregor for two paths, determinants written out by hand.
template <class P>
double kmg2(P p, double t, double T, const double a[2], const double b[2], const double x[2]) {
  const double d1 = p(t, a[0], x[0]) * p(t, a[1], x[1]) - p(t, a[0], x[1]) * p(t, a[1], x[0]);
  const double s = T - t;
  const double d2 = p(s, x[0], b[0]) * p(s, x[1], b[1]) - p(s, x[0], b[1]) * p(s, x[1], b[0]);
  return d1 * d2;
}

// Cell-discretized log energy of one unit measure on a uniform grid of n
// cells over [-h, h]: m^T H m + f.m with point interaction between centres,
// the exact cell average on the diagonal and the field sampled at centres.
struct DenseQp {
  Eigen::MatrixXd H;
  Eigen::VectorXd f;
  std::vector<double> centres;
};

template <class V>
DenseQp single_measure_qp(int n, double h, V potential) {
  DenseQp q;
  const double w = 2.0 * h / n;
  q.H.resize(n, n);
  q.f.resize(n);
  for (int i = 0; i < n; ++i) q.centres.push_back(-h + (i + 0.5) * w);
  for (int i = 0; i < n; ++i) {
    q.f(i) = potential(q.centres[i]);
    for (int j = 0; j < n; ++j)
      q.H(i, j) = i == j ? 1.5 - std::log(w) : -std::log(std::abs(q.centres[i] - q.centres[j]));
  }
  return q;
}

// Primal active-set method for min m^T H m + f.m subject to m >= 0 and
// sum m = M. Exact KKT solves on every working set; terminates because the
// objective strictly decreases between working sets.
inline Eigen::VectorXd active_set_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& f, double M,
                                     int max_rounds = 10000) {
  const int n = static_cast<int>(f.size());
  std::vector<bool> free(static_cast<std::size_t>(n), true);
  Eigen::VectorXd m = Eigen::VectorXd::Constant(n, M / n);
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (free[i]) idx.push_back(i);
    const int k = static_cast<int>(idx.size());
    // Stationary point of the objective on the face {m_i = 0 off idx}.
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd r(k + 1);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) K(a, b) = 2.0 * H(idx[a], idx[b]);
      K(a, k) = -1.0;
      K(k, a) = 1.0;
      r(a) = -f(idx[a]);
    }
    r(k) = M;
    const Eigen::VectorXd s = K.fullPivLu().solve(r);
    Eigen::VectorXd target = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < k; ++a) target(idx[a]) = s(a);
    // Step from the feasible m towards target, stopping at the first bound.
    double step = 1.0;
    int blocking = -1;
    for (int a = 0; a < k; ++a) {
      const int i = idx[a];
      const double d = target(i) - m(i);
      if (d < 0.0 && m(i) + step * d < 0.0) {
        step = -m(i) / d;
        blocking = i;
      }
    }
    m += step * (target - m);
    if (blocking >= 0) {
      m(blocking) = 0.0;
      free[blocking] = false;
      continue;
    }
    // At the face optimum: release the bound with the most negative multiplier.
    const double lambda = s(k);
    const Eigen::VectorXd g = 2.0 * H * m + f;
    int release = -1;
    double worst = -1e-13;
    for (int i = 0; i < n; ++i)
      if (!free[i] && g(i) - lambda < worst) {
        worst = g(i) - lambda;
        release = i;
      }
    if (release < 0) return m;
    free[release] = true;
  }
  return m;
}

}  // namespace oracle
