#include "mop/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "mop/error.hpp"

namespace mop::numerics {

namespace {

// Legendre P_m and P_m' at x by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int m, double x) {
  double p0 = 1.0, p1 = x;
  if (m == 0) return {1.0, 0.0};
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = m * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int m, double lo, double hi) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "gauss_legendre needs m >= 1");
  if (!(lo < hi)) throw Error(ErrorCode::invalid_interval, "gauss_legendre needs lo < hi");

  // Reference nodes on [-1, 1], computed for the positive half and mirrored so
  // the rule is exactly symmetric.
  std::vector<double> x(m), w(m);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre_with_derivative(m, z);
      dp = d;
      const double dz = p / d;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    dp = legendre_with_derivative(m, z).second;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = wi;
    w[m - 1 - i] = wi;
  }
  if (m % 2 == 1) {
    x[m / 2] = 0.0;
    const double dp = legendre_with_derivative(m, 0.0).second;
    w[m / 2] = 2.0 / (dp * dp);
  }

  QuadratureRule rule;
  rule.kind = QuadratureKind::legendre_on_interval;
  rule.lo = lo;
  rule.hi = hi;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = c + h * x[i];
    rule.weights[i] = h * w[i];
  }
  return rule;
}

QuadratureRule gauss_hermite(int m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "gauss_hermite needs m >= 1");
  constexpr double pim4 = 0.7511255444649425;  // pi^{-1/4}
  std::vector<double> x(m), w(m);
  const int half = (m + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // Initial guesses for the largest roots first.
    if (i == 0)
      z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(m), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
    }
    x[i] = z;
    w[i] = 2.0 / (pp * pp);
  }
  QuadratureRule rule;
  rule.kind = QuadratureKind::hermite_gaussian;
  rule.lo = -INFINITY;
  rule.hi = INFINITY;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  // x[] holds descending positive roots; lay them out ascending and symmetric.
  for (int i = 0; i < half; ++i) {
    rule.nodes[i] = -x[i];
    rule.nodes[m - 1 - i] = x[i];
    rule.weights[i] = w[i];
    rule.weights[m - 1 - i] = w[i];
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int per_panel, double lo, double hi) {
  if (panels < 1) throw Error(ErrorCode::invalid_argument, "composite rule needs panels >= 1");
  if (!(lo < hi)) throw Error(ErrorCode::invalid_interval, "composite rule needs lo < hi");
  const QuadratureRule ref = gauss_legendre(per_panel, -1.0, 1.0);
  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * per_panel);
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + width * p;
    const double c = a + 0.5 * width;
    for (int i = 0; i < per_panel; ++i) {
      rule.nodes.push_back(c + 0.5 * width * ref.nodes[i]);
      rule.weights.push_back(0.5 * width * ref.weights[i]);
    }
  }
  return rule;
}

}  // namespace mop::numerics
