#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mop/error.hpp"
#include "mop/philox.hpp"
#include "mop/sampling.hpp"

using namespace mop::sampling;
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

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("philox streams are reproducible and distinct") {
  PhiloxStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u32();
    CHECK(x == b.next_u32());
    same_c += x == c.next_u32();
    same_d += x == d.next_u32();
  }
  CHECK(same_c < 3);
  CHECK(same_d < 3);
}

TEST_CASE("philox uniform and normal draws") {
  PhiloxStream s(1, 0);
  double mu = 0.0, m2 = 0.0, lo = 1.0, hi = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mu += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(mu / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  mu = 0.0;
  double m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    mu += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  CHECK(std::abs(mu / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(m2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("gue second moment") {
  const EnsembleSpec spec{Ensemble::gue, 30, 0.0, 0.5};
  const auto samples = sample_batch(spec, 400, 9);
  std::vector<double> m2;
  for (const auto& s : samples) {
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    double t = 0.0;
    for (double e : s.eigenvalues) t += e * e;
    m2.push_back(t / 30.0);
  }
  const double mean = std::accumulate(m2.begin(), m2.end(), 0.0) / m2.size();
  double var = 0.0;
  for (double v : m2) var += (v - mean) * (v - mean);
  var /= m2.size() - 1;
  CHECK(std::abs(mean - 1.0) < 4.0 * std::sqrt(var / m2.size()));
}

TEST_CASE("samples depend only on seed and substream") {
  const EnsembleSpec spec{Ensemble::source, 12, 1.5, 0.5};
  const auto one = sample_batch(spec, 9, 77, 1);
  const auto three = sample_batch(spec, 9, 77, 3);
  const auto tail = sample_batch(spec, 4, 77, 2, 5);
  for (int i = 0; i < 9; ++i) {
    CHECK(one[i].eigenvalues == three[i].eigenvalues);
    CHECK(one[i].batch == static_cast<std::uint64_t>(i));
  }
  for (int i = 0; i < 4; ++i) CHECK(tail[i].eigenvalues == one[i + 5].eigenvalues);
  CHECK(sample(spec, 77, 4).eigenvalues == one[4].eigenvalues);
  CHECK(one[0].eigenvalues != one[1].eigenvalues);
}

TEST_CASE("external source shares the gue draw") {
  const auto g = sample_gue(10, 5, 2);
  const auto s = sample_source(10, 0.0, 5, 2);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(g.eigenvalues[i] - s.eigenvalues[i]) < 1e-12);
  const auto a = sample_source(10, 0.8, 5, 2);
  const double tg = std::accumulate(g.eigenvalues.begin(), g.eigenvalues.end(), 0.0);
  const double ta = std::accumulate(a.eigenvalues.begin(), a.eigenvalues.end(), 0.0);
  CHECK(std::abs(tg - ta) < 1e-12);
  CHECK(code_of([] { sample_source(7, 1.0, 1); }) == ErrorCode::odd_n);
}

TEST_CASE("nibm positions") {
  CHECK(nibm_map_defect(20, 0.3, 1.0) < 1e-12);
  CHECK(nibm_map_defect(50, 0.8, 2.5) < 1e-12);
  const auto m = nibm_map(0.25, 1.0);
  CHECK(m.scale == doctest::Approx(std::sqrt(0.25 * 0.75)));
  CHECK(m.alpha == doctest::Approx(std::sqrt(3.0)));
  CHECK(code_of([] { sample_nibm_positions(10, 1.0, 1.0, 1); }) == ErrorCode::time_out_of_range);
  CHECK(code_of([] { sample_nibm_positions(10, 0.0, 1.0, 1); }) == ErrorCode::time_out_of_range);
  // Starting points at +-a make the positions symmetric in law under x -> -x.
  const auto s = sample_batch({Ensemble::nibm, 20, 1.0, 0.3}, 300, 4);
  std::vector<double> pos, neg;
  for (const auto& x : s)
    for (double e : x.eigenvalues) {
      pos.push_back(e);
      neg.push_back(-e);
    }
  CHECK(two_sample_ks(pos, neg) < 1.63 * std::sqrt(2.0 / pos.size()) * 3.0);
}

TEST_CASE("histograms") {
  const auto s = sample_batch({Ensemble::gue, 20, 0.0, 0.5}, 50, 3);
  std::vector<double> edges;
  for (int i = 0; i <= 20; ++i) edges.push_back(-2.5 + 0.25 * i);
  const auto h = empirical_density(s, edges);
  CHECK(h.bins() == 20);
  double integral = 0.0;
  for (int i = 0; i < h.bins(); ++i) integral += h.value(i) * 0.25;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.total + h.outside == 1000.0);
  const auto c = empirical_density(s, edges, Histogram::Mode::counts);
  CHECK(std::accumulate(c.counts.begin(), c.counts.end(), 0.0) == h.total);
}

TEST_CASE("largest eigenvalue cdf needs enough samples") {
  const auto s = sample_batch({Ensemble::gue, 10, 0.0, 0.5}, 50, 3);
  CHECK(code_of([&] { largest_eigenvalue_cdf(s); }) == ErrorCode::insufficient_samples);
}

TEST_CASE("invalid ensembles") {
  CHECK(code_of([] { sample_gue(0, 1); }) == ErrorCode::invalid_argument);
}
