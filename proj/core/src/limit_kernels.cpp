#include "mop/limit_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mop/error.hpp"
#include "mop/fredholm.hpp"
#include "mop/quadrature.hpp"
#include "mop/special_functions.hpp"

namespace mop::limits {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kPearceyMaxArgument = 10.0;
constexpr double kTruncationTolerance = 1e-8;

void check_pearcey(const PearceyParams& p) {
  if (!(p.R > 0.0)) throw Error(ErrorCode::invalid_argument, "Pearcey contour radius must be > 0");
  if (p.m_c < 16) throw Error(ErrorCode::invalid_argument, "Pearcey m_c must be >= 16");
  if (!(p.delta > 0.0)) throw Error(ErrorCode::invalid_argument, "Pearcey delta must be > 0");
}

void check_argument(double x) {
  if (!(std::abs(x) <= kPearceyMaxArgument))
    throw Error(ErrorCode::out_of_range, "Pearcey argument must satisfy |x| <= 10");
}

// Discretized contour: points z_k and complex weights dz_k.
struct Contour {
  std::vector<cd> z;
  std::vector<cd> dz;
};

void add_ray(Contour& c, cd start, cd dir, bool inward, const numerics::QuadratureRule& g) {
  // Ray start + r dir, r in [0, R]; inward rays are traversed towards start.
  for (std::size_t i = 0; i < g.size(); ++i) {
    c.z.push_back(start + g.nodes[i] * dir);
    c.dz.push_back((inward ? -g.weights[i] : g.weights[i]) * dir);
  }
}

Contour t_contour(const PearceyParams& p, double R, int m) {
  const auto g = numerics::gauss_legendre(m, 0.0, R);
  const cd up = std::polar(1.0, kPi / 4), down = std::polar(1.0, -kPi / 4);
  Contour c;
  add_ray(c, {p.delta, 0.0}, up, true, g);
  add_ray(c, {p.delta, 0.0}, down, false, g);
  add_ray(c, {-p.delta, 0.0}, -up, true, g);
  add_ray(c, {-p.delta, 0.0}, -down, false, g);
  return c;
}

Contour s_contour(double R, int m) {
  const auto g = numerics::gauss_legendre(m, 0.0, R);
  Contour c;
  add_ray(c, {0.0, 0.0}, {0.0, -1.0}, true, g);
  add_ray(c, {0.0, 0.0}, {0.0, 1.0}, false, g);
  return c;
}

cd theta(cd t, double x, double b) {
  const cd t2 = t * t;
  return t2 * t2 / 4.0 - b * t2 / 2.0 + x * t;
}

cd phi(cd s, double y, double b) {
  const cd s2 = s * s;
  return -s2 * s2 / 4.0 + b * s2 / 2.0 - y * s;
}

// (1 / 2 pi i) int e^{f(z)} z^k dz, k = 0, 1, 2.
template <class F>
PearceyValue contour_moments(const Contour& c, F&& f) {
  cd m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < c.z.size(); ++i) {
    const cd e = std::exp(f(c.z[i])) * c.dz[i];
    m0 += e;
    m1 += e * c.z[i];
    m2 += e * c.z[i] * c.z[i];
  }
  const cd k = 1.0 / cd(0.0, 2.0 * kPi);
  return {(k * m0).real(), (k * m1).real(), (k * m2).real()};
}

double change(const PearceyValue& a, const PearceyValue& b) {
  const double scale = std::max({1.0, std::abs(b.value), std::abs(b.d1), std::abs(b.d2)});
  return std::max({std::abs(a.value - b.value), std::abs(a.d1 - b.d1), std::abs(a.d2 - b.d2)}) / scale;
}

void check_truncation(double delta_change, const char* what) {
  if (!(delta_change <= kTruncationTolerance))
    throw Error(ErrorCode::contour_truncation_insufficient,
                std::string(what) + " changes by " + std::to_string(delta_change) +
                    " when the contour length is doubled");
}

cd double_integral(double x, double y, const PearceyParams& p, double R, int m) {
  const Contour ct = t_contour(p, R, m);
  const Contour cs = s_contour(R, m);
  std::vector<cd> et(ct.z.size()), es(cs.z.size());
  for (std::size_t i = 0; i < ct.z.size(); ++i) et[i] = std::exp(theta(ct.z[i], x, p.b)) * ct.dz[i];
  for (std::size_t j = 0; j < cs.z.size(); ++j) es[j] = std::exp(phi(cs.z[j], y, p.b)) * cs.dz[j];
  cd sum = 0.0;
  for (std::size_t i = 0; i < ct.z.size(); ++i) {
    cd inner = 0.0;
    for (std::size_t j = 0; j < cs.z.size(); ++j) inner += es[j] / (cs.z[j] - ct.z[i]);
    sum += et[i] * inner;
  }
  const cd k = 1.0 / cd(0.0, 2.0 * kPi);
  return k * k * sum;
}

}  // namespace

double sine_kernel(double x, double y) {
  const double d = x - y;
  if (d == 0.0) return 1.0;
  const double u = kPi * d;
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

double airy_kernel(double x, double y) {
  if (!(std::abs(x) <= numerics::airy_max_argument && std::abs(y) <= numerics::airy_max_argument))
    throw Error(ErrorCode::out_of_range, "Airy kernel arguments must satisfy |x| <= 40");
  const auto diagonal = [](double z) {
    const auto a = numerics::airy_ai(z);
    return a.derivative * a.derivative - z * a.value * a.value;
  };
  if (x == y) return diagonal(x);
  // Symmetric in (x, y), so the midpoint diagonal is accurate to O((x - y)^2).
  if (std::abs(x - y) < 1e-6) return diagonal(0.5 * (x + y));
  const auto ax = numerics::airy_ai(x);
  const auto ay = numerics::airy_ai(y);
  return (ax.value * ay.derivative - ax.derivative * ay.value) / (x - y);
}

double tracy_widom_cdf(double t, int m, double L) {
  if (!(t >= -10.0)) throw Error(ErrorCode::out_of_range, "Tracy-Widom CDF needs t >= -10");
  if (m < 16) throw Error(ErrorCode::invalid_argument, "Tracy-Widom CDF needs m >= 16");
  if (!(L > 0.0)) throw Error(ErrorCode::invalid_argument, "truncation length must be > 0");
  const double upper = std::min(t + L, numerics::airy_max_argument);
  if (t >= upper) return 1.0;
  const double F = numerics::fredholm_det(airy_kernel, t, upper, m);
  return std::clamp(F, 0.0, 1.0);
}

PearceyValue pearcey_p(double x, const PearceyParams& params) {
  check_pearcey(params);
  check_argument(x);
  const auto f = [&](cd t) { return theta(t, x, params.b); };
  const auto v = contour_moments(t_contour(params, params.R, params.m_c), f);
  const auto w = contour_moments(t_contour(params, 2.0 * params.R, 2 * params.m_c), f);
  check_truncation(change(v, w), "p");
  return v;
}

PearceyValue pearcey_q(double y, const PearceyParams& params) {
  check_pearcey(params);
  check_argument(y);
  const auto f = [&](cd s) { return phi(s, y, params.b); };
  auto v = contour_moments(s_contour(params.R, params.m_c), f);
  auto w = contour_moments(s_contour(2.0 * params.R, 2 * params.m_c), f);
  check_truncation(change(v, w), "q");
  // d/dy brings down -s; moments are of s^k.
  v.d1 = -v.d1;
  return v;
}

std::complex<double> pearcey_kernel_int_complex(double x, double y, const PearceyParams& params) {
  check_pearcey(params);
  check_argument(x);
  check_argument(y);
  const cd v = double_integral(x, y, params, params.R, params.m_c);
  const cd w = double_integral(x, y, params, 2.0 * params.R, 2 * params.m_c);
  check_truncation(std::abs(v - w) / std::max(1.0, std::abs(w)), "Pearcey double integral");
  return v;
}

double pearcey_kernel_int(double x, double y, const PearceyParams& params) {
  return pearcey_kernel_int_complex(x, y, params).real();
}

double pearcey_kernel_ode(double x, double y, const PearceyParams& params) {
  const auto p = pearcey_p(x, params);
  const auto q = pearcey_q(y, params);
  if (x == y) return p.d1 * q.d2 - p.d2 * q.d1 - x * p.value * q.value;
  const double num = p.value * q.d2 - p.d1 * q.d1 + p.d2 * q.value - params.b * p.value * q.value;
  return num / (x - y);
}

}  // namespace mop::limits
