#include "mop/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mop/error.hpp"

namespace mop::numerics {

namespace {

constexpr double kAi0 = 0.355028053887817239260;    // 3^{-2/3} / Gamma(2/3)
constexpr double kAip0 = -0.258819403792806798405;  // -3^{-1/3} / Gamma(1/3)
constexpr double kAnchorStep = 0.5;
constexpr double kAnchorLimit = 8.0;
constexpr int kAnchorCount = 33;  // -8, -7.5, ..., 8

// Sums the Taylor series of the Airy ODE solution through (x0, y0, dy0) at x0 + h.
// Coefficients obey (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}.
AiryValue taylor_step(double x0, double y0, double dy0, double h) {
  double cm1 = 0.0, c0 = y0, c1 = dy0;
  double value = c0 + c1 * h;
  double deriv = c1;
  double hp = h;  // h^{k+1} for the derivative series
  double scale = std::abs(c0) + std::abs(c1 * h);
  int quiet = 0;
  for (int k = 0; k < 400; ++k) {
    const double c2 = (x0 * c0 + cm1) / ((k + 2.0) * (k + 1.0));
    const double term = c2 * hp * h;
    const double dterm = (k + 2.0) * c2 * hp;
    value += term;
    deriv += dterm;
    hp *= h;
    cm1 = c0;
    c0 = c1;
    c1 = c2;
    scale = std::max(scale, std::abs(value));
    if (std::abs(term) < 1e-18 * scale && std::abs(dterm) < 1e-18 * (std::abs(deriv) + 1e-300))
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 3) break;
  }
  return {value, deriv};
}

// Coefficients u_k of the Airy asymptotic series and v_k of its derivative.
struct AsymptoticCoefficients {
  static constexpr int kTerms = 60;
  std::array<double, kTerms> u{};
  std::array<double, kTerms> v{};
  AsymptoticCoefficients() {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < kTerms; ++k) {
      u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
      v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
    }
  }
};

const AsymptoticCoefficients& asymptotic() {
  static const AsymptoticCoefficients c;
  return c;
}

AiryValue airy_asymptotic_positive(double x) {
  const auto& c = asymptotic();
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double su = 0.0, sv = 0.0, zk = 1.0, last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < AsymptoticCoefficients::kTerms; ++k) {
    const double tu = c.u[k] / zk;
    if (std::abs(tu) > last) break;  // series starts to diverge
    last = std::abs(tu);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    su += sign * tu;
    sv += sign * c.v[k] / zk;
    zk *= zeta;
  }
  const double e = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
  const double q = std::pow(x, 0.25);
  return {e / q * su, -e * q * sv};
}

AiryValue airy_asymptotic_negative(double x) {
  const auto& c = asymptotic();
  const double ax = -x;
  const double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
  // Even/odd sub-series of u and v, summed until the terms stop decreasing.
  double ue = 0.0, uo = 0.0, ve = 0.0, vo = 0.0;
  double zk = 1.0, last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < AsymptoticCoefficients::kTerms; ++k) {
    const double tu = c.u[k] / zk;
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      ue += sign * tu;
      ve += sign * c.v[k] / zk;
    } else {
      uo += sign * tu;
      vo += sign * c.v[k] / zk;
    }
    zk *= zeta;
  }
  const double phase = zeta - 0.25 * std::numbers::pi;
  const double cs = std::cos(phase), sn = std::sin(phase);
  const double q = std::pow(ax, 0.25);
  const double rsp = 1.0 / std::sqrt(std::numbers::pi);
  const double value = rsp / q * (cs * ue + sn * uo);
  const double deriv = rsp * q * (sn * ve - cs * vo);
  return {value, deriv};
}

struct AnchorTable {
  std::array<AiryValue, kAnchorCount> values{};
  AnchorTable() {
    const int mid = kAnchorCount / 2;
    values[mid] = {kAi0, kAip0};
    for (int i = mid - 1; i >= 0; --i) {
      const double x0 = (i + 1 - mid) * kAnchorStep;
      values[i] = taylor_step(x0, values[i + 1].value, values[i + 1].derivative, -kAnchorStep);
    }
    values[kAnchorCount - 1] = airy_asymptotic_positive(kAnchorLimit);
    for (int i = kAnchorCount - 2; i > mid; --i) {
      const double x0 = (i + 1 - mid) * kAnchorStep;
      values[i] = taylor_step(x0, values[i + 1].value, values[i + 1].derivative, -kAnchorStep);
    }
  }
};

const AnchorTable& anchors() {
  static const AnchorTable table;
  return table;
}

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double log_gamma_lanczos(double x) {
  // Gamma(x) = Gamma(z + 1) with z = x - 1.
  const double z = x - 1.0;
  double a = kLanczos[0];
  const double t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double log_bessel_series(double alpha, double x) {
  // ln of sum_k (x/2)^{2k+alpha} / (k! Gamma(k+alpha+1)); the sum is taken
  // relative to the k = 0 term, which stays below e^{61} for x <= 60.
  const double half = 0.5 * x;
  const double log_t0 = alpha * std::log(half) - log_gamma(alpha + 1.0);
  const double q = half * half;
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 4000; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + alpha));
    sum += term;
    if (term < 1e-17 * sum && k > half) break;
  }
  return log_t0 + std::log(sum);
}

double log_bessel_asymptotic(double alpha, double x) {
  // I_alpha(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k / x^k
  const double mu = 4.0 * alpha * alpha;
  double term = 1.0, sum = 1.0, last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

constexpr double kBesselSeriesLimit = 60.0;

}  // namespace

AiryValue airy_ai(double x) {
  if (!(std::abs(x) <= airy_max_argument))
    throw Error(ErrorCode::out_of_range, "airy_ai argument outside [-40, 40]");
  if (x > kAnchorLimit) return airy_asymptotic_positive(x);
  if (x < -kAnchorLimit) return airy_asymptotic_negative(x);
  const auto& table = anchors();
  const int mid = kAnchorCount / 2;
  const int idx = static_cast<int>(std::lround(x / kAnchorStep)) + mid;
  const double x0 = (idx - mid) * kAnchorStep;
  const AiryValue a = table.values[idx];
  if (x == x0) return a;
  return taylor_step(x0, a.value, a.derivative, x - x0);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::domain_error, "log_gamma needs x > 0");
  if (x < 0.5) {
    // Reflection keeps the Lanczos sum away from its pole at z = -1.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma_lanczos(1.0 - x);
  }
  return log_gamma_lanczos(x);
}

double log_bessel_i(double alpha, double x) {
  if (!(alpha > -1.0)) throw Error(ErrorCode::invalid_order, "bessel_i needs alpha > -1");
  if (!(x >= 0.0)) throw Error(ErrorCode::domain_error, "bessel_i needs x >= 0");
  if (x == 0.0) {
    if (alpha == 0.0) return 0.0;
    return alpha > 0.0 ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity();
  }
  if (x <= kBesselSeriesLimit) return log_bessel_series(alpha, x);
  return log_bessel_asymptotic(alpha, x);
}

double bessel_i(double alpha, double x) { return std::exp(log_bessel_i(alpha, x)); }

}  // namespace mop::numerics
