#include "mop/mop_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mop/error.hpp"
#include "mop/linalg.hpp"

namespace mop::kernel {

namespace {

using numerics::QuadratureKind;
using numerics::QuadratureRule;
using weights::SignedLog;
using weights::WeightFamily;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_zero(const SignedLog& w) { return w.sign == 0 || w.log_abs == kNegInf; }

void check_multi_index(const WeightFamily& family, const MultiIndex& nu) {
  if (nu.size() != family.size())
    throw Error(ErrorCode::invalid_argument, "multi-index has " + std::to_string(nu.size()) +
                                                 " entries but the family has " +
                                                 std::to_string(family.size()) + " weights");
  for (int e : nu.entries)
    if (e < 0) throw Error(ErrorCode::invalid_argument, "multi-index entries must be >= 0");
}

// ln of the plain (dx) integration weight at each node.
std::vector<double> log_plain_weights(const QuadratureRule& rule) {
  std::vector<double> out(rule.size());
  for (std::size_t m = 0; m < rule.size(); ++m) {
    out[m] = std::log(rule.weights[m]);
    if (rule.kind == QuadratureKind::hermite_gaussian) out[m] += rule.nodes[m] * rule.nodes[m];
  }
  return out;
}

std::vector<int> active_weights(const MultiIndex& nu) {
  std::vector<int> out;
  for (int k = 0; k < nu.size(); ++k)
    if (nu.entries[static_cast<std::size_t>(k)] > 0) out.push_back(k);
  return out;
}

// ln of the gauge: mean of |w_k| over the active weights.
double log_gauge(const std::vector<SignedLog>& w, const std::vector<int>& active) {
  double peak = kNegInf;
  for (int k : active) peak = std::max(peak, w[static_cast<std::size_t>(k)].log_abs);
  if (peak == kNegInf) return kNegInf;
  double s = 0.0;
  for (int k : active) {
    const auto& wk = w[static_cast<std::size_t>(k)];
    if (!is_zero(wk)) s += std::exp(wk.log_abs - peak);
  }
  return peak + std::log(s / static_cast<double>(active.size()));
}

double max_finite(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, x);
  return m;
}

// Everything the biorthogonalization needs at the rule's nodes.
struct Assembly {
  std::vector<int> active;
  std::vector<std::vector<SignedLog>> w;  // w[m][k]
  std::vector<double> log_gauge;          // ln omega before shifting
  double omega_shift = 0.0;
  RecurrenceBasis poly;
  std::vector<RecurrenceBasis> blocks;  // indexed like `active`
  std::vector<double> block_shift;
  Eigen::MatrixXd b_tilde;  // M x (poly_degree + 1)
  Eigen::MatrixXd a_tilde;  // M x n
};

Assembly assemble(const WeightFamily& family, const MultiIndex& nu, const QuadratureRule& rule,
                  int poly_degree) {
  Assembly s;
  s.active = active_weights(nu);
  const std::size_t M = rule.size();
  const auto log_w = log_plain_weights(rule);
  s.w.resize(M);
  s.log_gauge.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    s.w[m] = family.log_weights(rule.nodes[m]);
    s.log_gauge[m] = log_gauge(s.w[m], s.active);
  }

  std::vector<double> e(M);
  for (std::size_t m = 0; m < M; ++m) e[m] = log_w[m] + s.log_gauge[m];
  s.omega_shift = max_finite(e);
  if (!std::isfinite(s.omega_shift))
    throw Error(ErrorCode::singular_gram, "all weights vanish on the quadrature rule");

  std::vector<double> mass(M), root(M);
  for (std::size_t m = 0; m < M; ++m) {
    root[m] = std::exp(0.5 * (e[m] - s.omega_shift));
    mass[m] = root[m] * root[m];
  }
  s.poly = lanczos_basis(rule.nodes, mass, poly_degree);
  s.b_tilde.resize(static_cast<Eigen::Index>(M), poly_degree + 1);
  std::vector<double> vals(static_cast<std::size_t>(poly_degree) + 1);
  for (std::size_t m = 0; m < M; ++m) {
    s.poly.evaluate(rule.nodes[m], vals);
    for (int j = 0; j <= poly_degree; ++j)
      s.b_tilde(static_cast<Eigen::Index>(m), j) = root[m] * vals[static_cast<std::size_t>(j)];
  }

  int n = 0;
  for (int k : s.active) n += nu.entries[static_cast<std::size_t>(k)];
  s.a_tilde.resize(static_cast<Eigen::Index>(M), n);
  int col = 0;
  for (int k : s.active) {
    const int nk = nu.entries[static_cast<std::size_t>(k)];
    // ln of sqrt(W) |w_k| / sqrt(omega) at each node.
    for (std::size_t m = 0; m < M; ++m) {
      const auto& wk = s.w[m][static_cast<std::size_t>(k)];
      e[m] = is_zero(wk) ? kNegInf : 0.5 * log_w[m] + wk.log_abs - 0.5 * s.log_gauge[m];
    }
    const double shift = max_finite(e);
    if (!std::isfinite(shift))
      throw Error(ErrorCode::singular_gram, "weight " + std::to_string(k) + " vanishes on the rule");
    for (std::size_t m = 0; m < M; ++m) {
      root[m] = std::exp(e[m] - shift);
      mass[m] = root[m] * root[m];
    }
    RecurrenceBasis basis = lanczos_basis(rule.nodes, mass, nk - 1);
    std::vector<double> pv(static_cast<std::size_t>(nk));
    for (std::size_t m = 0; m < M; ++m) {
      basis.evaluate(rule.nodes[m], pv);
      const double sg = static_cast<double>(s.w[m][static_cast<std::size_t>(k)].sign);
      for (int i = 0; i < nk; ++i)
        s.a_tilde(static_cast<Eigen::Index>(m), col + i) = sg * root[m] * pv[static_cast<std::size_t>(i)];
    }
    s.blocks.push_back(std::move(basis));
    s.block_shift.push_back(shift);
    col += nk;
  }
  return s;
}

struct Factorization {
  Eigen::MatrixXd q;  // M x n, orthonormal columns
  Eigen::MatrixXd r;  // n x n upper triangular
  Eigen::MatrixXd c;  // n x n, B~^T Q
  double cond_c;
  double cond_r;
  double condition;   // cond_c * cond_r
};

// Beyond this the weighted span is numerically rank deficient.
constexpr double kRankLimit = 1e14;

Factorization factorize(const Assembly& s, int n) {
  const Eigen::Index M = s.a_tilde.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(s.a_tilde);
  Factorization f;
  f.q = qr.householderQ() * Eigen::MatrixXd::Identity(M, n);
  f.r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  f.c = s.b_tilde.leftCols(n).transpose() * f.q;
  const auto finite_or_inf = [](double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; };
  f.cond_c = finite_or_inf(numerics::condition_number(f.c));
  f.cond_r = finite_or_inf(numerics::condition_number(f.r));
  f.condition = f.cond_c * f.cond_r;
  if (std::isnan(f.condition)) f.condition = std::numeric_limits<double>::infinity();
  return f;
}

}  // namespace

int MultiIndex::total() const noexcept { return std::accumulate(entries.begin(), entries.end(), 0); }

void RecurrenceBasis::evaluate(double x, std::span<double> out) const {
  if (out.empty()) return;
  if (static_cast<int>(out.size()) > max_degree() + 1)
    throw Error(ErrorCode::invalid_argument, "basis evaluated beyond its degree");
  out[0] = p0_;
  if (out.size() > 1) out[1] = (x - a_[0]) * p0_ / b_[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k)
    out[k + 1] = ((x - a_[k]) * out[k] - b_[k - 1] * out[k - 1]) / b_[k];
}

double RecurrenceBasis::leading_coefficient(int k) const {
  if (k < 0 || k > max_degree()) throw Error(ErrorCode::invalid_argument, "degree out of range");
  double c = p0_;
  for (int i = 0; i < k; ++i) c /= b_[static_cast<std::size_t>(i)];
  return c;
}

std::vector<double> RecurrenceBasis::monomial(int k) const {
  if (k < 0 || k > max_degree()) throw Error(ErrorCode::invalid_argument, "degree out of range");
  using LD = long double;
  std::vector<LD> prev, cur{static_cast<LD>(p0_)};
  for (int i = 0; i < k; ++i) {
    std::vector<LD> next(cur.size() + 1, 0.0L);
    for (std::size_t d = 0; d < cur.size(); ++d) {
      next[d + 1] += cur[d];
      next[d] -= static_cast<LD>(a_[static_cast<std::size_t>(i)]) * cur[d];
    }
    if (i > 0)
      for (std::size_t d = 0; d < prev.size(); ++d)
        next[d] -= static_cast<LD>(b_[static_cast<std::size_t>(i) - 1]) * prev[d];
    for (auto& v : next) v /= static_cast<LD>(b_[static_cast<std::size_t>(i)]);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {cur.begin(), cur.end()};
}

RecurrenceBasis lanczos_basis(std::span<const double> nodes, std::span<const double> masses,
                              int degree) {
  if (nodes.size() != masses.size() || nodes.empty())
    throw Error(ErrorCode::invalid_argument, "nodes and masses must be nonempty and equal length");
  if (degree < 0) degree = 0;
  const Eigen::Index M = static_cast<Eigen::Index>(nodes.size());
  Eigen::Map<const Eigen::VectorXd> x(nodes.data(), M);
  Eigen::VectorXd root(M);
  double total = 0.0, xmax = 1.0;
  for (Eigen::Index m = 0; m < M; ++m) {
    const double w = masses[static_cast<std::size_t>(m)];
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_argument, "masses must be finite and >= 0");
    root(m) = std::sqrt(w);
    total += w;
    if (w > 0.0) xmax = std::max(xmax, std::abs(x(m)));
  }
  if (!(total > 0.0)) throw Error(ErrorCode::singular_gram, "measure has zero total mass");

  Eigen::MatrixXd V(M, degree + 1);
  V.col(0) = root / std::sqrt(total);
  std::vector<double> a, b;
  for (int k = 0; k < degree; ++k) {
    Eigen::VectorXd r = x.cwiseProduct(V.col(k));
    a.push_back(V.col(k).dot(r));
    for (int pass = 0; pass < 2; ++pass)
      r -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * r);
    const double beta = r.norm();
    if (!(beta > 1e-12 * xmax))
      throw Error(ErrorCode::singular_gram,
                  "measure supports fewer than " + std::to_string(degree + 1) + " independent polynomials");
    b.push_back(beta);
    V.col(k + 1) = r / beta;
  }
  return RecurrenceBasis(1.0 / std::sqrt(total), std::move(a), std::move(b));
}

double PolynomialRep::operator()(double x) const {
  std::vector<double> v(coefficients.size());
  basis.evaluate(x, v);
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += coefficients[j] * v[j];
  return s;
}

std::vector<double> PolynomialRep::monomial_coefficients() const {
  std::vector<long double> acc(static_cast<std::size_t>(degree) + 1, 0.0L);
  for (int j = 0; j <= degree; ++j) {
    const auto pj = basis.monomial(j);
    for (std::size_t d = 0; d < pj.size(); ++d)
      acc[d] += static_cast<long double>(coefficients[static_cast<std::size_t>(j)]) * pj[d];
  }
  return {acc.begin(), acc.end()};
}

namespace {

// Window where the weights times (1 + |x|)^{2N} stay within e^{-40} of their
// peak. Ignores the weights' own length scale, so it can cut off tails that
// the degree-N polynomials still see.
WorkingInterval coarse_interval(const WeightFamily& family, int total_degree) {
  const auto sup = family.support();

  const double poly = 2.0 * std::max(total_degree, 0);
  const auto profile = [&](double x) {
    double peak = kNegInf;
    for (const auto& w : family.log_weights(x))
      if (!is_zero(w)) peak = std::max(peak, w.log_abs);
    return peak + poly * std::log1p(std::abs(x));
  };

  constexpr int kPoints = 2001;
  constexpr double kDrop = 40.0;
  for (double L = 16.0; L <= 4096.0; L *= 2.0) {
    const double lo = std::isfinite(sup.lo) ? sup.lo : -L;
    const double hi = std::isfinite(sup.hi) ? sup.hi : L;
    const double h = (hi - lo) / (kPoints + 1);
    std::vector<double> xs(kPoints), fs(kPoints);
    for (int i = 0; i < kPoints; ++i) {
      xs[i] = lo + h * (i + 1);
      fs[i] = profile(xs[i]);
    }
    const double peak = max_finite(fs);
    if (!std::isfinite(peak)) throw Error(ErrorCode::out_of_support, "weights vanish on the scan window");
    int first = 0, last = kPoints - 1;
    while (first < kPoints && !(fs[first] >= peak - kDrop)) ++first;
    while (last >= 0 && !(fs[last] >= peak - kDrop)) --last;
    const bool open_left = !std::isfinite(sup.lo) && first == 0;
    const bool open_right = !std::isfinite(sup.hi) && last == kPoints - 1;
    if (open_left || open_right) continue;
    double a = first == 0 ? lo : xs[first] - 2.0 * h;
    double b = last == kPoints - 1 ? hi : xs[last] + 2.0 * h;
    a = std::max(a, lo);
    b = std::min(b, hi);
    return {a, b};
  }
  throw Error(ErrorCode::out_of_support, "weights do not decay within |x| <= 4096");
}

// Extent of the nodes where omega(x) max_{k <= N} p_k(x)^2 is within e^{-40}
// of its peak, p_k orthonormal for omega restricted to `window`. Empty when
// the set reaches an edge of the window that is not a support bound.
struct Refined {
  bool ok = false;
  WorkingInterval iv{};
};

Refined refine(const WeightFamily& family, int N, WorkingInterval window) {
  const auto sup = family.support();
  const int m = 200 + 4 * N;
  const auto rule = numerics::gauss_legendre(m, window.lo, window.hi);
  std::vector<int> all(static_cast<std::size_t>(family.size()));
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> lw(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) lw[i] = log_gauge(family.log_weights(rule.nodes[i]), all);
  const double shift = max_finite(lw);
  std::vector<double> masses(lw.size());
  for (int i = 0; i < m; ++i) masses[i] = rule.weights[i] * std::exp(lw[i] - shift);
  const RecurrenceBasis basis = lanczos_basis(rule.nodes, masses, N);

  std::vector<double> tail(lw.size()), p(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i < m; ++i) {
    basis.evaluate(rule.nodes[i], p);
    double big = 0.0;
    for (double v : p) big = std::max(big, std::abs(v));
    tail[i] = lw[i] + 2.0 * std::log(big);
  }
  const double peak = max_finite(tail);
  int first = 0, last = m - 1;
  while (first < m && !(tail[first] >= peak - 40.0)) ++first;
  while (last >= 0 && !(tail[last] >= peak - 40.0)) --last;
  const bool pinned_lo = window.lo == sup.lo;
  const bool pinned_hi = window.hi == sup.hi;
  if ((first <= 1 && !pinned_lo) || (last >= m - 2 && !pinned_hi)) return {};
  const double lo = first <= 1 ? window.lo : rule.nodes[first - 2];
  const double hi = last >= m - 2 ? window.hi : rule.nodes[last + 2];
  return {true, {lo, hi}};
}

}  // namespace

WorkingInterval working_interval(const WeightFamily& family, int total_degree) {
  const auto sup = family.support();
  if (std::isfinite(sup.lo) && std::isfinite(sup.hi) && !sup.open_lo && !sup.open_hi)
    return {sup.lo, sup.hi};
  const int N = std::max(total_degree, 0);
  const WorkingInterval coarse = coarse_interval(family, N);
  const double mid = 0.5 * (coarse.lo + coarse.hi);
  double half = coarse.hi - coarse.lo;
  for (int attempt = 0; attempt < 6; ++attempt, half *= 2.0) {
    const WorkingInterval window{std::max(mid - half, sup.lo), std::min(mid + half, sup.hi)};
    try {
      const Refined r = refine(family, N, window);
      if (r.ok) return {std::min(r.iv.lo, coarse.lo), std::max(r.iv.hi, coarse.hi)};
    } catch (const Error&) {
      break;
    }
  }
  return coarse;
}

QuadratureRule working_rule(const WeightFamily& family, const MultiIndex& nu, int nodes) {
  check_multi_index(family, nu);
  const auto iv = working_interval(family, nu.total());
  if (nodes <= 0) nodes = 160 + 6 * nu.total();
  return numerics::gauss_legendre(nodes, iv.lo, iv.hi);
}

PolynomialRep compute_mop(const WeightFamily& family, const MultiIndex& nu, const QuadratureRule& rule,
                          double condition_limit) {
  check_multi_index(family, nu);
  const int N = nu.total();
  PolynomialRep out;
  out.degree = N;
  out.monic = true;
  if (N == 0) {
    // Reference basis: orthonormal for the mean weight; only p_0 is used.
    MultiIndex all{std::vector<int>(static_cast<std::size_t>(family.size()), 1)};
    Assembly s = assemble(family, all, rule, 0);
    out.basis = s.poly;
    out.coefficients = {1.0 / s.poly.leading_coefficient(0)};
    return out;
  }
  Assembly s = assemble(family, nu, rule, N);
  Factorization f = factorize(s, N);
  // The polynomial only depends on the span of the weighted side, so R's
  // conditioning matters just for the numerical rank of that span.
  out.condition = f.cond_c;
  if (!(f.cond_c <= condition_limit) || !(f.cond_r <= kRankLimit))
    throw Error(ErrorCode::non_unique_mop, "orthogonality system is singular (condition estimates " +
                                               std::to_string(f.cond_c) + ", " + std::to_string(f.cond_r) + ")");
  const double cN = 1.0 / s.poly.leading_coefficient(N);
  const Eigen::VectorXd d = f.q.transpose() * s.b_tilde.col(N);
  const Eigen::VectorXd c = f.c.transpose().fullPivLu().solve(-cN * d);
  out.basis = s.poly;
  out.coefficients.assign(c.data(), c.data() + c.size());
  out.coefficients.push_back(cN);
  return out;
}

std::vector<double> mop_residuals(const PolynomialRep& p, const WeightFamily& family, const MultiIndex& nu,
                                  const QuadratureRule& rule) {
  check_multi_index(family, nu);
  if (p.degree != nu.total())
    throw Error(ErrorCode::invalid_argument, "polynomial degree differs from |nu|");
  const std::size_t M = rule.size();
  const auto log_w = log_plain_weights(rule);
  std::vector<std::vector<SignedLog>> w(M);
  std::vector<double> pv(M);
  for (std::size_t m = 0; m < M; ++m) {
    w[m] = family.log_weights(rule.nodes[m]);
    pv[m] = p(rule.nodes[m]);
  }
  std::vector<double> out;
  std::vector<double> e(M), mass(M);
  for (int k = 0; k < nu.size(); ++k) {
    const int nk = nu.entries[static_cast<std::size_t>(k)];
    if (nk == 0) continue;
    for (std::size_t m = 0; m < M; ++m) {
      const auto& wk = w[m][static_cast<std::size_t>(k)];
      e[m] = is_zero(wk) ? kNegInf : log_w[m] + wk.log_abs;
    }
    const double shift = max_finite(e);
    double pnorm = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      mass[m] = std::exp(e[m] - shift);
      pnorm += mass[m] * pv[m] * pv[m];
    }
    pnorm = std::sqrt(pnorm);
    for (int j = 0; j < nk; ++j) {
      double num = 0.0, xnorm = 0.0;
      for (std::size_t m = 0; m < M; ++m) {
        const double xj = std::pow(rule.nodes[m], j);
        const double sg = static_cast<double>(w[m][static_cast<std::size_t>(k)].sign);
        num += mass[m] * sg * pv[m] * xj;
        xnorm += mass[m] * xj * xj;
      }
      const double den = pnorm * std::sqrt(xnorm);
      out.push_back(den > 0.0 ? num / den : 0.0);
    }
  }
  return out;
}

KernelEvaluator build_kernel(const WeightFamily& family, const MultiIndex& nu, const QuadratureRule& rule,
                             double condition_limit) {
  check_multi_index(family, nu);
  const int n = nu.total();
  if (n < 1) throw Error(ErrorCode::invalid_argument, "kernel needs |nu| >= 1");
  Assembly s = assemble(family, nu, rule, n - 1);
  Factorization f = factorize(s, n);
  if (!(f.condition <= condition_limit))
    throw Error(ErrorCode::singular_gram,
                "Gram matrix is singular (condition estimate " + std::to_string(f.condition) + ")");

  KernelEvaluator k(family, nu, rule);
  k.n_ = n;
  k.log_omega_shift_ = s.omega_shift;
  k.active_ = s.active;
  k.poly_basis_ = std::move(s.poly);
  k.block_basis_ = std::move(s.blocks);
  k.block_shift_ = std::move(s.block_shift);
  k.r_ = std::move(f.r);
  k.c_inv_ = f.c.fullPivLu().inverse();
  k.condition_ = f.condition;
  return k;
}

KernelEvaluator::Side KernelEvaluator::side(double x) const {
  const auto w = family_.log_weights(x);
  const double lg = log_gauge(w, active_);
  Side out{Eigen::VectorXd::Zero(n_), Eigen::VectorXd::Zero(n_)};
  if (lg == kNegInf) return out;

  std::vector<double> vals(static_cast<std::size_t>(n_));
  poly_basis_.evaluate(x, vals);
  const double root = std::exp(0.5 * (lg - log_omega_shift_));
  for (int j = 0; j < n_; ++j) out.b(j) = root * vals[static_cast<std::size_t>(j)];

  Eigen::VectorXd a(n_);
  int col = 0;
  for (std::size_t i = 0; i < active_.size(); ++i) {
    const int k = active_[i];
    const int nk = nu_.entries[static_cast<std::size_t>(k)];
    const auto& wk = w[static_cast<std::size_t>(k)];
    if (is_zero(wk)) {
      a.segment(col, nk).setZero();
    } else {
      std::span<double> pv(vals.data(), static_cast<std::size_t>(nk));
      block_basis_[i].evaluate(x, pv);
      const double f = wk.sign * std::exp(wk.log_abs - 0.5 * lg - block_shift_[i]);
      for (int j = 0; j < nk; ++j) a(col + j) = f * pv[static_cast<std::size_t>(j)];
    }
    col += nk;
  }
  out.q = r_.transpose().triangularView<Eigen::Lower>().solve(a);
  return out;
}

double KernelEvaluator::operator()(double x, double y) const {
  const Side sx = side(x);
  const Side sy = x == y ? sx : side(y);
  return sx.q.dot(c_inv_ * sy.b);
}

double KernelEvaluator::trace() const {
  double s = 0.0;
  for (std::size_t m = 0; m < rule_.size(); ++m) {
    const double x = rule_.nodes[m];
    double w = rule_.weights[m];
    if (rule_.kind == QuadratureKind::hermite_gaussian) w *= std::exp(x * x);
    s += w * (*this)(x, x);
  }
  return s;
}

double KernelEvaluator::reproducing_defect(double x, double y) const {
  const Side sx = side(x);
  const Side sy = side(y);
  const Eigen::VectorXd left = c_inv_.transpose() * sx.q;  // K(x, z) = left . b(z)
  const Eigen::VectorXd right = c_inv_ * sy.b;             // K(z, y) = q(z) . right
  double s = 0.0;
  for (std::size_t m = 0; m < rule_.size(); ++m) {
    const double z = rule_.nodes[m];
    double w = rule_.weights[m];
    if (rule_.kind == QuadratureKind::hermite_gaussian) w *= std::exp(z * z);
    const Side sz = side(z);
    s += w * left.dot(sz.b) * sz.q.dot(right);
  }
  return std::abs(s - sx.q.dot(right));
}

double eval_kernel(const KernelEvaluator& k, double x, double y) {
  const auto iv = k.interval();
  if (!(x >= iv.lo && x <= iv.hi && y >= iv.lo && y <= iv.hi))
    throw Error(ErrorCode::out_of_range, "kernel evaluated outside its working interval");
  return k(x, y);
}

double mean_density(const KernelEvaluator& k, double x) { return eval_kernel(k, x, x) / k.n(); }

}  // namespace mop::kernel
