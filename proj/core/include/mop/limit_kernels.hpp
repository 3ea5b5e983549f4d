#pragma once

#include <complex>

namespace mop::limits {

double sine_kernel(double x, double y);

// (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y); Ai'(x)^2 - x Ai(x)^2 on the
// diagonal. |x|, |y| <= 40, otherwise out-of-range.
double airy_kernel(double x, double y);

// F_2(t) = det(I - K_Airy) on L^2(t, t + L), Nystrom with m Gauss-Legendre
// nodes. Requires t >= -10 and m >= 16.
double tracy_widom_cdf(double t, int m = 60, double L = 12.0);

// Pearcey functions
//   p(x) = 1/(2 pi i) int_C e^{t^4/4 - b t^2/2 + x t} dt,
//   q(y) = 1/(2 pi i) int_{-i inf}^{i inf} e^{-s^4/4 + b s^2/2 - y s} ds,
// where C is the union of two wedges: rays from +inf e^{i pi/4} to delta to
// +inf e^{-i pi/4}, and rays from -inf e^{i pi/4} to -delta to
// -inf e^{-i pi/4}. The integrand is entire, so delta does not change p; it
// keeps C away from the s-line in the double integral. Each ray is truncated
// at length R and integrated with m_c Gauss-Legendre nodes.
//
// These satisfy p''' = b p' - x p and q''' = y q + b q'.
struct PearceyParams {
  double b = 0.0;
  double R = 6.0;
  int m_c = 64;
  double delta = 0.5;
};

struct PearceyValue {
  double value;
  double d1;
  double d2;
};

// Both throw contour-truncation-insufficient when the (R, m_c) -> (2R, 2m_c)
// change exceeds 1e-8 * max(1, |value|). |x| <= 10.
PearceyValue pearcey_p(double x, const PearceyParams& params);
PearceyValue pearcey_q(double y, const PearceyParams& params);

// Double contour integral over C x iR.
std::complex<double> pearcey_kernel_int_complex(double x, double y, const PearceyParams& params);
double pearcey_kernel_int(double x, double y, const PearceyParams& params);

// (p(x) q''(y) - p'(x) q'(y) + p''(x) q(y) - b p(x) q(y)) / (x - y), with the
// diagonal limit p' q'' - p'' q' - x p q.
double pearcey_kernel_ode(double x, double y, const PearceyParams& params);

}  // namespace mop::limits
