#pragma once

#include <functional>
#include <vector>

namespace mop::numerics {

enum class QuadratureKind { legendre_on_interval, hermite_gaussian };

// Nodes are strictly increasing and every weight is positive. For the Hermite
// kind the rule integrates against e^{-x^2}; `lo`/`hi` are then infinite.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureKind kind = QuadratureKind::legendre_on_interval;
  double lo = -1.0;
  double hi = 1.0;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// m-point Gauss-Legendre rule on (lo, hi). Throws invalid-interval if lo >= hi.
QuadratureRule gauss_legendre(int m, double lo, double hi);

// m-point Gauss-Hermite rule for the weight e^{-x^2} on the real line.
QuadratureRule gauss_hermite(int m);

// Composite Gauss-Legendre: `panels` equal panels of `per_panel` nodes each.
QuadratureRule composite_gauss_legendre(int panels, int per_panel, double lo, double hi);

}  // namespace mop::numerics
