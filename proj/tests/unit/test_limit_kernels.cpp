#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>

#include "mop/error.hpp"
#include "mop/limit_kernels.hpp"
#include "mop/quadrature.hpp"
#include "oracles.hpp"

using namespace mop::limits;
using mop::ErrorCode;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const mop::Error& e) {
    return e.code();
  }
  FAIL("no mop::Error thrown");
  return ErrorCode::invalid_argument;
}

double airy_oracle(double x, double y) {
  using boost::math::airy_ai;
  using boost::math::airy_ai_prime;
  if (x == y) return airy_ai_prime(x) * airy_ai_prime(x) - x * airy_ai(x) * airy_ai(x);
  return (airy_ai(x) * airy_ai_prime(y) - airy_ai_prime(x) * airy_ai(y)) / (x - y);
}

}  // namespace

TEST_CASE("sine kernel") {
  CHECK(sine_kernel(0.3, 0.3) == 1.0);
  for (double x : {-2.0, 0.0, 0.7})
    for (double y : {-1.1, 0.25, 3.0}) CHECK(sine_kernel(x, y) == doctest::Approx(oracle::sine(x, y)).epsilon(1e-14));
  CHECK(sine_kernel(1.0, 1.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("airy kernel against boost") {
  for (double x : {-6.0, -1.5, 0.0, 0.8, 4.0})
    for (double y : {-3.0, -1.5, 0.2, 2.5}) {
      CHECK(std::abs(airy_kernel(x, y) - airy_oracle(x, y)) < 1e-11);
    }
  for (double x : {-5.0, 0.0, 1.3}) {
    CHECK(std::abs(airy_kernel(x, x) - airy_oracle(x, x)) < 1e-12);
    CHECK(std::abs(airy_kernel(x, x + 1e-8) - airy_oracle(x, x)) < 1e-7);
  }
  CHECK(code_of([] { airy_kernel(41.0, 0.0); }) == ErrorCode::out_of_range);
}

TEST_CASE("tracy-widom cdf: published moments") {
  // Mean and variance of F_2 (Prahofer-Spohn tables).
  const auto left = mop::numerics::gauss_legendre(80, -9.0, 0.0);
  const auto right = mop::numerics::gauss_legendre(60, 0.0, 9.0);
  const double ml = left.integrate([](double t) { return tracy_widom_cdf(t, 40); });
  const double mr = right.integrate([](double t) { return 1.0 - tracy_widom_cdf(t, 40); });
  const double mean = mr - ml;
  CHECK(mean == doctest::Approx(-1.7710868074).epsilon(1e-8));
  const double sl = left.integrate([](double t) { return 2.0 * t * tracy_widom_cdf(t, 40); });
  const double sr = right.integrate([](double t) { return 2.0 * t * (1.0 - tracy_widom_cdf(t, 40)); });
  const double second = sr - sl;
  CHECK(second - mean * mean == doctest::Approx(0.8131947928).epsilon(1e-8));
}

TEST_CASE("tracy-widom cdf: convergence and shape") {
  double prev = 0.0;
  for (double t = -8.0; t <= 5.0; t += 0.25) {
    const double a = tracy_widom_cdf(t, 40), b = tracy_widom_cdf(t, 80);
    CHECK(std::abs(a - b) < 1e-10);
    CHECK(a >= prev);
    prev = a;
  }
  CHECK(tracy_widom_cdf(0.0) == doctest::Approx(0.96937282835526).epsilon(1e-11));
  CHECK(tracy_widom_cdf(-9.0) < 1e-20);
  CHECK(1.0 - tracy_widom_cdf(6.0) < 1e-10);
  CHECK(code_of([] { tracy_widom_cdf(-11.0); }) == ErrorCode::out_of_range);
  CHECK(code_of([] { tracy_widom_cdf(0.0, 8); }) == ErrorCode::invalid_argument);
}

TEST_CASE("pearcey functions at the origin") {
  const PearceyParams p;
  const auto pv = pearcey_p(0.0, p);
  CHECK(std::abs(pv.value) < 1e-14);
  CHECK(pv.d1 == doctest::Approx(-1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-11));
  const auto qv = pearcey_q(0.0, p);
  CHECK(qv.value == doctest::Approx(std::tgamma(0.25) / (std::pow(2.0, 1.5) * std::numbers::pi)).epsilon(1e-11));
  CHECK(std::abs(qv.d1) < 1e-14);
}

TEST_CASE("pearcey q equals its real cosine integral") {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double b : {-1.0, 0.0, 1.0})
    for (double y : {-2.5, -0.4, 0.0, 1.2, 3.0}) {
      PearceyParams p;
      p.b = b;
      const double ref = integrator.integrate([&](double s) {
                           return std::exp(-s * s * s * s / 4.0 - b * s * s / 2.0) * std::cos(y * s);
                         }) /
                         std::numbers::pi;
      CHECK(std::abs(pearcey_q(y, p).value - ref) < 1e-11);
    }
}

TEST_CASE("pearcey ode residuals") {
  const double h = 1e-4;
  for (double b : {-1.0, 0.0, 1.0}) {
    PearceyParams p;
    p.b = b;
    for (double x = -3.0; x <= 3.0; x += 0.5) {
      const auto c = pearcey_p(x, p);
      const double d3 = (pearcey_p(x + h, p).d2 - pearcey_p(x - h, p).d2) / (2 * h);
      CHECK(std::abs(d3 - (b * c.d1 - x * c.value)) < 1e-6);
      const auto q = pearcey_q(x, p);
      const double e3 = (pearcey_q(x + h, p).d2 - pearcey_q(x - h, p).d2) / (2 * h);
      CHECK(std::abs(e3 - (x * q.value + b * q.d1)) < 1e-6);
    }
  }
}

TEST_CASE("pearcey kernel: double integral against the ode form") {
  for (double b : {-1.0, 0.0, 1.0}) {
    PearceyParams p;
    p.b = b;
    for (double x : {-3.0, -1.5, 0.0, 1.5, 3.0})
      for (double y : {-3.0, -1.5, 0.0, 1.5, 3.0}) {
        const double a = pearcey_kernel_int(x, y, p), o = pearcey_kernel_ode(x, y, p);
        CHECK(std::abs(a - o) <= 1e-5 * std::abs(o));
        CHECK(std::abs(pearcey_kernel_int_complex(x, y, p).imag()) < 1e-12);
      }
  }
}

TEST_CASE("pearcey kernel is continuous across the diagonal") {
  const PearceyParams p;
  for (double x : {-1.0, 0.4}) {
    const double d = pearcey_kernel_ode(x, x, p);
    CHECK(std::abs(pearcey_kernel_ode(x, x + 1e-5, p) - d) < 1e-4);
  }
}

TEST_CASE("pearcey truncation and range errors") {
  PearceyParams p;
  p.R = 1.0;
  CHECK(code_of([&] { pearcey_p(0.5, p); }) == ErrorCode::contour_truncation_insufficient);
  CHECK(code_of([] { pearcey_p(11.0, PearceyParams{}); }) == ErrorCode::out_of_range);
}
