#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mop/quadrature.hpp"
#include "mop/weights.hpp"

namespace mop::kernel {

// (n_1, ..., n_r); entry j pairs with weight j of the family.
struct MultiIndex {
  std::vector<int> entries;

  int size() const noexcept { return static_cast<int>(entries.size()); }
  int total() const noexcept;
};

// Orthonormal polynomials p_0..p_d of a discrete measure, held through their
// three-term recurrence x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}.
class RecurrenceBasis {
 public:
  RecurrenceBasis() = default;
  RecurrenceBasis(double p0, std::vector<double> a, std::vector<double> b)
      : p0_(p0), a_(std::move(a)), b_(std::move(b)) {}

  int max_degree() const noexcept { return static_cast<int>(a_.size()); }
  // p_0(x)..p_{out.size()-1}(x); out.size() <= max_degree() + 1.
  void evaluate(double x, std::span<double> out) const;
  double leading_coefficient(int k) const;
  // Power-basis coefficients of p_k, ascending.
  std::vector<double> monomial(int k) const;

 private:
  double p0_ = 1.0;
  std::vector<double> a_;  // a_0..a_{d-1}
  std::vector<double> b_;  // b_1..b_d
};

// Stable Lanczos (full reorthogonalization) for the measure sum_m masses[m]
// delta(x - nodes[m]); returns p_0..p_degree.
RecurrenceBasis lanczos_basis(std::span<const double> nodes, std::span<const double> masses,
                              int degree);

// A polynomial as coefficients in an orthonormal reference basis.
struct PolynomialRep {
  int degree = 0;
  bool monic = false;
  RecurrenceBasis basis;
  std::vector<double> coefficients;  // in basis, degrees 0..degree
  double condition = 1.0;            // condition estimate of the defining system

  double operator()(double x) const;
  std::vector<double> monomial_coefficients() const;
};

struct WorkingInterval {
  double lo;
  double hi;
};

// Interval outside which every weight, times a polynomial factor of degree
// 2 * total_degree, is below e^{-40} of its peak. Clamped to the support.
WorkingInterval working_interval(const weights::WeightFamily& family, int total_degree);

// Gauss-Legendre rule on the working interval; nodes <= 0 picks 160 + 6 |nu|.
numerics::QuadratureRule working_rule(const weights::WeightFamily& family, const MultiIndex& nu,
                                      int nodes = 0);

inline constexpr double default_condition_limit = 1e12;

// Type II multiple orthogonal polynomial: monic, degree |nu|, orthogonal to
// x^j w_k for j < n_k. Throws non-unique-mop when the condition estimate of
// the orthogonality conditions exceeds condition_limit, or when the weighted
// functions are numerically linearly dependent.
PolynomialRep compute_mop(const weights::WeightFamily& family, const MultiIndex& nu,
                          const numerics::QuadratureRule& rule,
                          double condition_limit = default_condition_limit);

// Normalized orthogonality integrals int P x^j w_k / (|P|_k |x^j|_k), ordered
// by (k, j) lexicographically.
std::vector<double> mop_residuals(const PolynomialRep& p, const weights::WeightFamily& family,
                                  const MultiIndex& nu, const numerics::QuadratureRule& rule);

// Correlation kernel of the MOP ensemble built by biorthogonalizing the span of
// {x^i w_k : i < n_k} against the polynomials of degree < |nu|.
//
// Both sides are taken relative to the gauge omega = mean_k |w_k|: the
// polynomial side is orthonormal for omega, the weighted side is
// orthonormalized in L^2(1/omega) by Householder QR, and the kernel is
// K(x, y) = q(x)^T C^{-1} b(y), C = int b q^T. This is the correlation
// kernel conjugated by sqrt(omega(y) / omega(x)); it is symmetric for r = 1
// and all determinants, hence all correlation functions, are unchanged.
class KernelEvaluator {
 public:
  int n() const noexcept { return n_; }
  const MultiIndex& multi_index() const noexcept { return nu_; }
  const numerics::QuadratureRule& rule() const noexcept { return rule_; }
  const weights::WeightFamily& family() const noexcept { return family_; }
  WorkingInterval interval() const noexcept { return {rule_.lo, rule_.hi}; }
  double condition() const noexcept { return condition_; }

  double operator()(double x, double y) const;
  double mean_density(double x) const { return (*this)(x, x) / n_; }

  // int K(x, x) dx under the stored rule.
  double trace() const;
  // |int K(x, z) K(z, y) dz - K(x, y)| under the stored rule.
  double reproducing_defect(double x, double y) const;

 private:
  friend KernelEvaluator build_kernel(const weights::WeightFamily&, const MultiIndex&,
                                      const numerics::QuadratureRule&, double);

  KernelEvaluator(weights::WeightFamily family, MultiIndex nu, numerics::QuadratureRule rule)
      : family_(std::move(family)), nu_(std::move(nu)), rule_(std::move(rule)) {}

  struct Side {
    Eigen::VectorXd q;  // weighted side, R^{-T} a(x)
    Eigen::VectorXd b;  // polynomial side
  };
  Side side(double x) const;

  weights::WeightFamily family_;
  MultiIndex nu_;
  numerics::QuadratureRule rule_;
  int n_ = 0;
  double log_omega_shift_ = 0.0;
  std::vector<int> active_;                 // weights with n_k > 0
  RecurrenceBasis poly_basis_;              // orthonormal for omega
  std::vector<RecurrenceBasis> block_basis_;
  std::vector<double> block_shift_;
  Eigen::MatrixXd r_;     // upper triangular
  Eigen::MatrixXd c_inv_;
  double condition_ = 1.0;
};

KernelEvaluator build_kernel(const weights::WeightFamily& family, const MultiIndex& nu,
                             const numerics::QuadratureRule& rule,
                             double condition_limit = default_condition_limit);

// Throws out-of-range outside the evaluator's working interval.
double eval_kernel(const KernelEvaluator& k, double x, double y);
double mean_density(const KernelEvaluator& k, double x);

}  // namespace mop::kernel
