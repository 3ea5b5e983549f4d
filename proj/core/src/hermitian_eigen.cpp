#include "mop/hermitian_eigen.hpp"

#include <algorithm>
#include <cmath>

#include "mop/error.hpp"

namespace mop::numerics {

double HermitianMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < order_; ++j)
    for (std::size_t k = j; k < order_; ++k)
      worst = std::max(worst, std::abs((*this)(j, k) - std::conj((*this)(k, j))));
  return worst;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> offdiag) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  // e[i] couples rows i-1 and i after the shift below (QL convention).
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = offdiag[i];

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw Error(ErrorCode::singular_discretization, "QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i;
        bool underflow = false;
        for (i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& input) {
  const std::size_t n = input.order();
  if (n == 0) return {};

  double scale = 1.0;
  for (const auto& v : input.data()) scale = std::max(scale, std::abs(v));
  if (input.asymmetry() > hermitian_tolerance * scale)
    throw Error(ErrorCode::non_hermitian_input, "matrix is not Hermitian within tolerance");

  using cplx = std::complex<double>;
  // Work on a copy; column-major access is via a(i, j) on the row-major store.
  HermitianMatrix a = input;
  std::vector<cplx> v(n), p(n), w(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Reflect a(k+1:n, k) onto a multiple of e_{k+1}.
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    const double xnorm = std::sqrt(xnorm2);
    double tail2 = xnorm2 - std::norm(a(k + 1, k));
    if (tail2 <= 0.0) continue;  // already tridiagonal in this column

    const cplx x0 = a(k + 1, k);
    const double ax0 = std::abs(x0);
    const cplx phase = ax0 > 0.0 ? x0 / ax0 : cplx(1.0, 0.0);
    const cplx alpha = -phase * xnorm;

    for (std::size_t i = 0; i < n; ++i) v[i] = 0.0;
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    const double tau = 2.0 / vnorm2;

    // p = tau * A v on the trailing block.
    for (std::size_t i = k; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      p[i] = tau * s;
    }
    // w = p - (tau/2) (v^* p) v
    cplx vp = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vp += std::conj(v[i]) * p[i];
    const cplx coef = 0.5 * tau * vp;
    for (std::size_t i = k; i < n; ++i) w[i] = p[i] - coef * v[i];
    // A <- A - v w^* - w v^* on rows/cols k+1..n-1
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
  }

  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = std::abs(a(i + 1, i));
  return tridiagonal_eigenvalues(std::move(diag), std::move(off));
}

}  // namespace mop::numerics
