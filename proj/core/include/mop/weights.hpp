#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mop/polynomial.hpp"

namespace mop::weights {

enum class WeightKind {
  multiple_hermite,
  external_source,
  squared_bessel_pair,
  two_matrix_induced,
  tabulated,
};

std::string to_string(WeightKind kind);

// A weight value held as sign * exp(log_abs). sign is 0 for an exact zero.
struct SignedLog {
  int sign = 1;
  double log_abs = 0.0;

  double value() const noexcept;
};

struct Support {
  double lo;  // may be -inf
  double hi;  // may be +inf
  bool open_lo = true;
  bool open_hi = true;

  bool contains(double x) const noexcept;
};

// w_j(x) = exp(n (-T x^2 / (2 t (T - t)) + a_j x / t)); n = 1 is the unscaled form.
struct MultipleHermiteParams {
  double t;
  double T;
  std::vector<double> a;
};

// w_j(x) = exp(-n (V(x) - a_j x)).
struct ExternalSourceParams {
  Polynomial V;
  std::vector<double> a;
};

// Two weights on (0, inf) from non-intersecting squared Bessel paths that all
// start at a and end at 0; t and T are used as given.
struct SquaredBesselPairParams {
  double alpha;
  double a;
  double t;
  double T;
};

// Inner-integral quadrature for the two-matrix weights: y runs over
// [-y_max, y_max], split into symmetric panels of at most
// panel_width / sqrt(n) with nodes_per_panel Gauss-Legendre nodes each.
struct TwoMatrixQuadrature {
  int nodes_per_panel = 16;
  double panel_width = 0.3;
};

// w_{j,n}(x) = e^{-n V(x)} * int y^j e^{-n (y^4/4 - tau x y)} dy, j = 0, 1, 2.
struct TwoMatrixParams {
  Polynomial V;
  double tau;
  TwoMatrixQuadrature quadrature;
};

// Sampled weights; evaluation interpolates ln w_j by monotone piecewise-cubic
// Hermite splines, so interpolated values stay positive.
struct TabulatedParams {
  std::vector<double> x;
  std::vector<std::vector<double>> values;  // values[j][i] = w_j(x_i)
  std::vector<std::vector<double>> log_values;
  std::vector<std::vector<double>> log_slopes;
};

using WeightParams = std::variant<MultipleHermiteParams, ExternalSourceParams,
                                  SquaredBesselPairParams, TwoMatrixParams, TabulatedParams>;

// The weights w_0..w_{r-1} of one MOP ensemble. Indices are zero-based
// throughout; for the two-matrix kind index j is also the power of y.
// Immutable once built.
class WeightFamily {
 public:
  static WeightFamily multiple_hermite(int n, double t, double T, std::vector<double> a);
  static WeightFamily external_source(int n, Polynomial V, std::vector<double> a);
  static WeightFamily squared_bessel_pair(int n, double alpha, double a, double t, double T);
  static WeightFamily two_matrix_induced(int n, Polynomial V, double tau,
                                         TwoMatrixQuadrature quadrature = {});
  static WeightFamily tabulated(int n, std::vector<double> x,
                                std::vector<std::vector<double>> values);
  // CSV with header `x,w1,...,wr`.
  static WeightFamily tabulated_from_csv(int n, std::istream& in);

  WeightKind kind() const noexcept { return kind_; }
  int size() const noexcept { return r_; }
  int scale() const noexcept { return n_; }
  Support support() const noexcept;
  const WeightParams& params() const noexcept { return params_; }

  // True when every weight is positive on the interior of the support (all
  // kinds except two-matrix-induced, whose odd-index weight changes sign).
  bool positive() const noexcept { return kind_ != WeightKind::two_matrix_induced; }

  SignedLog log_weight(int j, double x) const;
  // All r weights at x; cheaper than r separate calls for the two-matrix kind.
  std::vector<SignedLog> log_weights(double x) const;

  // Multi-index with the given total, split as the models prescribe: equal
  // halves (ceil first) for r = 2, the n = p r + q rule for the two-matrix
  // kind, and a balanced split otherwise.
  std::vector<int> default_multi_index(int total) const;

 private:
  WeightFamily(WeightKind kind, int n, int r, WeightParams params)
      : kind_(kind), n_(n), r_(r), params_(std::move(params)) {}

  void check_index(int j) const;
  void check_support(double x) const;

  WeightKind kind_;
  int n_;
  int r_;
  WeightParams params_;
};

// w_j(x) as a plain value (may underflow to 0 at large n).
double eval_weight(const WeightFamily& family, int j, double x);

struct TransitionKind {
  enum class Type { brownian, squared_bessel };
  Type type = Type::brownian;
  double alpha = 0.0;

  static TransitionKind brownian() { return {Type::brownian, 0.0}; }
  static TransitionKind squared_bessel(double alpha);
};

// Transition density p_t(x, y). Brownian motion is standard (sigma = 1).
double transition_density(const TransitionKind& kind, double t, double x, double y);
double log_transition_density(const TransitionKind& kind, double t, double x, double y);

// Unnormalized Karlin-McGregor density det[p_t(a_j, x_k)] * det[p_{T-t}(x_k, b_l)].
double kmg_density(const TransitionKind& kind, double t, double T, std::span<const double> a,
                   std::span<const double> b, std::span<const double> x);

}  // namespace mop::weights
