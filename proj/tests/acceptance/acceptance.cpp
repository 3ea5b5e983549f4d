// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runtime budgets are part of each criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "mop/equilibrium.hpp"
#include "mop/fredholm.hpp"
#include "mop/limit_kernels.hpp"
#include "mop/mop_kernel.hpp"
#include "mop/quadrature.hpp"
#include "mop/sampling.hpp"
#include "mop/weights.hpp"
#include "oracles.hpp"

namespace {

using mop::Polynomial;
using mop::weights::WeightFamily;
namespace eq = mop::equilibrium;
namespace kn = mop::kernel;
namespace lim = mop::limits;
namespace sm = mop::sampling;

const Polynomial gaussian({0.0, 0.0, 0.5});

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

kn::KernelEvaluator kernel_for(const WeightFamily& fam, const std::vector<int>& nu) {
  const kn::MultiIndex mi{nu};
  return kn::build_kernel(fam, mi, kn::working_rule(fam, mi));
}

double mass_outside(const eq::DiscreteMeasure& mu, double r) {
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    const double lo = mu.edges[i], hi = mu.edges[i + 1];
    const double out = std::max(0.0, std::min(hi, -r) - lo) + std::max(0.0, hi - std::max(lo, r));
    s += mu.masses[i] * out / (hi - lo);
  }
  return s;
}

bool interior_gap_at_zero(const eq::DiscreteMeasure& mu) {
  for (const auto& g : eq::support_gap(mu))
    if (g.lo <= 0.0 && g.hi >= 0.0 && g.lo > mu.edges.front() && g.hi < mu.edges.back()) return true;
  return false;
}

// 1
Outcome semicircle_law() {
  Outcome o;
  const auto sol = eq::minimize(eq::make_single_ep(gaussian, eq::GridSpec::uniform(400, 2.5)), {5000, 1e-9, false});
  const auto& mu = sol.measures[0];
  const double d0 = 0.5 * (mu.density(199) + mu.density(200));
  o.require(sol.diagnostics.converged && sol.diagnostics.iterations <= 5000,
            "converged in " + std::to_string(sol.diagnostics.iterations) + " iterations");
  o.require(std::abs(d0 * std::numbers::pi - 1.0) <= 0.02, "density(0)*pi = " + fmt("%.5f", d0 * std::numbers::pi));
  const double out = mass_outside(mu, 2.05);
  o.require(out < 0.005, "mass outside [-2.05,2.05] = " + fmt("%.2e", out));
  return o;
}

// 2
Outcome finite_n_density() {
  Outcome o;
  const int n = 30;
  const auto K = kernel_for(WeightFamily::external_source(n, gaussian, {0.0}), {n});
  double worst = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double x = -1.5 + 0.01 * i;
    const double ref = oracle::semicircle(x);
    worst = std::max(worst, std::abs(kn::mean_density(K, x) - ref) / ref);
  }
  o.require(worst <= 0.05, "sup relative deviation on [-1.5,1.5] = " + fmt("%.4f", worst));
  return o;
}

// 3
Outcome projector_laws() {
  Outcome o;
  double worst_trace = 0.0, worst_rep = 0.0;
  for (int n : {4, 10, 20}) {
    const std::vector<WeightFamily> families{
        WeightFamily::external_source(n, gaussian, {0.0}),
        WeightFamily::external_source(n, gaussian, {2.0, -2.0}),
        WeightFamily::two_matrix_induced(n, gaussian, 1.0),
    };
    for (const auto& fam : families) {
      const auto K = kernel_for(fam, fam.default_multi_index(n));
      worst_trace = std::max(worst_trace, std::abs(K.trace() - n));
      const auto iv = K.interval();
      for (double s : {0.25, 0.4, 0.5, 0.6, 0.75})
        for (double t : {0.3, 0.5, 0.7}) {
          const double x = iv.lo + s * (iv.hi - iv.lo), y = iv.lo + t * (iv.hi - iv.lo);
          worst_rep = std::max(worst_rep, K.reproducing_defect(x, y));
        }
    }
  }
  o.require(worst_trace <= 1e-8, "max |trace - n| = " + fmt("%.2e", worst_trace));
  o.require(worst_rep <= 1e-7, "max reproducing defect = " + fmt("%.2e", worst_rep));
  return o;
}

// 4
Outcome mop_orthogonality() {
  Outcome o;
  std::vector<double> tx, tw1, tw2;
  for (int i = 0; i <= 240; ++i) {
    tx.push_back(-6.0 + 0.05 * i);
    tw1.push_back(std::exp(-tx.back() * tx.back() / 2 + tx.back()));
    tw2.push_back(std::exp(-tx.back() * tx.back() / 2 - tx.back()));
  }
  double worst = 0.0;
  for (int total : {1, 4, 8, 12}) {
    const std::vector<WeightFamily> families{
        WeightFamily::external_source(total, gaussian, {0.0}),
        WeightFamily::external_source(1, Polynomial({0.0, 0.0, 1.0}), {0.0}),
        WeightFamily::external_source(total, gaussian, {1.0, -1.0}),
        WeightFamily::multiple_hermite(total, 0.5, 1.0, {-1.0, 0.0, 1.0}),
        WeightFamily::squared_bessel_pair(total, 0.5, 1.0, 0.5, 1.0),
        WeightFamily::two_matrix_induced(total, gaussian, 1.0),
        WeightFamily::tabulated(total, tx, {tw1, tw2}),
    };
    for (const auto& fam : families) {
      std::vector<std::vector<int>> nus{fam.default_multi_index(total)};
      if (fam.size() > 1) {
        std::vector<int> lop(static_cast<std::size_t>(fam.size()), 0);
        lop[0] = total;
        nus.push_back(lop);
      }
      for (const auto& nu : nus) {
        const kn::MultiIndex mi{nu};
        const auto rule = kn::working_rule(fam, mi);
        const auto P = kn::compute_mop(fam, mi, rule);
        for (double r : kn::mop_residuals(P, fam, mi, rule)) worst = std::max(worst, std::abs(r));
      }
    }
  }
  o.require(worst < 1e-9, "max residual = " + fmt("%.2e", worst));

  const auto herm = WeightFamily::external_source(1, Polynomial({0.0, 0.0, 1.0}), {0.0});
  double worst_c = 0.0;
  for (int d = 0; d <= 12; ++d) {
    const kn::MultiIndex mi{{d}};
    const auto got = kn::compute_mop(herm, mi, kn::working_rule(herm, mi)).monomial_coefficients();
    const auto ref = oracle::gaussian_monic_by_moments(d);
    for (std::size_t i = 0; i < ref.size(); ++i)
      worst_c = std::max(worst_c, std::abs(got[i] - ref[i]) / std::max(1.0, std::abs(ref[i])));
  }
  o.require(worst_c <= 1e-10, "hermite coefficients vs moment system = " + fmt("%.2e", worst_c));
  return o;
}

// 5
Outcome bulk_universality() {
  Outcome o;
  std::vector<double> errs;
  for (int n : {20, 40, 60}) {
    const auto K = kernel_for(WeightFamily::external_source(n, gaussian, {0.0}), {n});
    const double scale = n / std::numbers::pi;
    double sup = 0.0;
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        const double u = -1.0 + 0.1 * i, v = -1.0 + 0.1 * j;
        const double k = kn::eval_kernel(K, u / scale, v / scale) / scale;
        sup = std::max(sup, std::abs(k - oracle::sine(u, v)));
      }
    errs.push_back(sup);
  }
  o.require(errs[1] < errs[0] && errs[2] < errs[1],
            "sup errors n=20,40,60: " + fmt("%.3e", errs[0]) + ", " + fmt("%.3e", errs[1]) + ", " + fmt("%.3e", errs[2]));
  return o;
}

// 6
Outcome tracy_widom() {
  Outcome o;
  double diff = 0.0, prev = -1.0;
  bool monotone = true;
  for (int i = 0; i <= 60; ++i) {
    const double t = -9.0 + 0.25 * i;
    const double a = lim::tracy_widom_cdf(t, 40), b = lim::tracy_widom_cdf(t, 80);
    diff = std::max(diff, std::abs(a - b));
    if (a < prev) monotone = false;
    prev = a;
  }
  o.require(diff <= 1e-8, "m=40 vs 80 = " + fmt("%.2e", diff));
  o.require(monotone, "monotone on [-9,6]");
  const double lo = lim::tracy_widom_cdf(-9.0), hi = lim::tracy_widom_cdf(6.0);
  o.require(lo < 1e-3, "F(-9) = " + fmt("%.2e", lo));
  o.require(hi > 1.0 - 1e-6, "1-F(6) = " + fmt("%.2e", 1.0 - hi));
  const auto samples = sm::sample_batch({sm::Ensemble::gue, 100, 0.0, 0.5}, 500, 2024);
  const auto cdf = sm::largest_eigenvalue_cdf(samples);
  o.require(cdf.ks_distance < 0.12, "KS(n=100, 500 samples) = " + fmt("%.4f", cdf.ks_distance));
  return o;
}

// 7
Outcome pearcey() {
  Outcome o;
  double worst = 0.0, res_p = 0.0, res_q = 0.0;
  const double h = 1e-4;
  for (double b : {-1.0, 0.0, 1.0}) {
    lim::PearceyParams p;
    p.b = b;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double x = -3.0 + 1.5 * i, y = -3.0 + 1.5 * j;
        const double a = lim::pearcey_kernel_int(x, y, p), d = lim::pearcey_kernel_ode(x, y, p);
        worst = std::max(worst, std::abs(a - d) / std::abs(d));
      }
    for (int i = 0; i <= 24; ++i) {
      const double x = -3.0 + 0.25 * i;
      const auto pv = lim::pearcey_p(x, p);
      const double p3 = (lim::pearcey_p(x + h, p).d2 - lim::pearcey_p(x - h, p).d2) / (2 * h);
      res_p = std::max(res_p, std::abs(p3 - (b * pv.d1 - x * pv.value)));
      const auto qv = lim::pearcey_q(x, p);
      const double q3 = (lim::pearcey_q(x + h, p).d2 - lim::pearcey_q(x - h, p).d2) / (2 * h);
      res_q = std::max(res_q, std::abs(q3 - (x * qv.value + b * qv.d1)));
    }
  }
  o.require(worst <= 1e-5, "max relative int/ode difference = " + fmt("%.2e", worst));
  o.require(res_p < 1e-6 && res_q < 1e-6, "ode residuals p " + fmt("%.1e", res_p) + ", q " + fmt("%.1e", res_q));
  return o;
}

// 8
Outcome source_phases() {
  Outcome o;
  const auto solve = [](double a) { return eq::minimize(eq::make_source_ep(gaussian, a), {5000, 1e-9, false}); };
  const auto count_active = [](const eq::DiscreteMeasure& mu) {
    const auto act = mu.cap_active();
    return static_cast<int>(std::count(act.begin(), act.end(), true));
  };

  const auto s2 = solve(2.0);
  o.require(s2.diagnostics.converged, "a=2 converged");
  o.require(count_active(s2.measures[1]) == 0, "a=2 cap inactive");
  o.require(interior_gap_at_zero(s2.measures[0]), "a=2 gap around 0");

  const auto s05 = solve(0.5);
  o.require(s05.diagnostics.converged, "a=0.5 converged");
  const auto act = s05.measures[1].cap_active();
  const int N = static_cast<int>(act.size());
  bool symmetric = true;
  for (int i = 0; i < N; ++i) symmetric = symmetric && act[i] == act[N - 1 - i];
  const int first = static_cast<int>(std::find(act.begin(), act.end(), true) - act.begin());
  const int last = N - 1 - static_cast<int>(std::find(act.rbegin(), act.rend(), true) - act.rbegin());
  bool contiguous = first <= last;
  for (int i = first; contiguous && i <= last; ++i) contiguous = act[i];
  const bool around_zero = first <= N / 2 - 1 && last >= N / 2;
  o.require(symmetric && contiguous && around_zero,
            "a=0.5 cap active on " + std::to_string(count_active(s05.measures[1])) + " symmetric cells around 0");

  const auto s12 = solve(1.2), s08 = solve(0.8);
  o.require(s12.diagnostics.converged && s08.diagnostics.converged, "a=1.2, 0.8 converged");
  o.require(interior_gap_at_zero(s12.measures[0]), "a=1.2 gap");
  o.require(!interior_gap_at_zero(s08.measures[0]), "a=0.8 no gap");
  return o;
}

// 9
Outcome two_matrix() {
  Outcome o;
  const auto sol = eq::minimize(eq::make_twomatrix_ep(gaussian, 1.0));
  const auto& d = sol.diagnostics;
  o.require(d.converged, "converged in " + std::to_string(d.iterations) + " iterations");
  o.require(d.max_mass_defect <= 1e-12, "max mass defect over iterates = " + fmt("%.1e", d.max_mass_defect));
  o.require(d.symmetry_defect <= 1e-8, "symmetry defect = " + fmt("%.1e", d.symmetry_defect));
  bool nonincreasing = true;
  for (std::size_t i = 1; i < d.energy_history.size(); ++i)
    nonincreasing = nonincreasing && d.energy_history[i] <= d.energy_history[i - 1];
  o.require(nonincreasing, "energy nonincreasing over " + std::to_string(d.energy_history.size()) + " iterates");
  return o;
}

// 10
Outcome sampler_vs_kernel() {
  Outcome o;
  const int n = 40, S = 500, bins = 40;
  const double lo = -3.6, hi = 3.6, w = (hi - lo) / bins;
  const auto K = kernel_for(WeightFamily::external_source(n, gaussian, {2.0, -2.0}), {n / 2, n / 2});
  const auto samples = sm::sample_batch({sm::Ensemble::source, n, 2.0, 0.5}, S, 77);

  std::vector<double> sum(bins, 0.0), sum2(bins, 0.0);
  int outside = 0;
  for (const auto& s : samples) {
    std::vector<double> c(bins, 0.0);
    for (double e : s.eigenvalues) {
      const int b = static_cast<int>(std::floor((e - lo) / w));
      if (b < 0 || b >= bins) {
        ++outside;
        continue;
      }
      c[b] += 1.0 / (n * w);
    }
    for (int b = 0; b < bins; ++b) {
      sum[b] += c[b];
      sum2[b] += c[b] * c[b];
    }
  }
  const auto iv = K.interval();
  double worst_z = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double a = std::max(lo + b * w, iv.lo), c = std::min(lo + (b + 1) * w, iv.hi);
    double expected = 0.0;
    if (c > a) {
      const auto rule = mop::numerics::gauss_legendre(12, a, c);
      expected = rule.integrate([&](double x) { return kn::mean_density(K, x); }) / w;
    }
    const double mean = sum[b] / S;
    const double var = std::max(0.0, (sum2[b] - S * mean * mean) / (S - 1));
    const double poisson = std::sqrt(std::max(expected * n * S * w, 1.0)) / (n * S * w);
    const double se = std::max(std::sqrt(var / S), poisson);
    worst_z = std::max(worst_z, std::abs(mean - expected) / se);
  }
  o.detail = std::to_string(outside) + " of " + std::to_string(n * S) + " eigenvalues outside [-3.6,3.6]";
  o.require(worst_z <= 3.0, "max |z| over 40 bins = " + fmt("%.2f", worst_z));
  return o;
}

// 11
Outcome small_oracles() {
  Outcome o;
  const auto sol = eq::minimize(eq::make_single_ep(gaussian, eq::GridSpec::uniform(20, 2.5)));
  const auto qp = oracle::single_measure_qp(20, 2.5, [](double x) { return 0.5 * x * x; });
  const Eigen::VectorXd ref = oracle::active_set_qp(qp.H, qp.f, 1.0);
  double dq = 0.0;
  for (int i = 0; i < 20; ++i) dq = std::max(dq, std::abs(sol.measures[0].masses[i] - ref(i)));
  o.require(dq <= 1e-6, "N=20 minimizer vs active-set QP = " + fmt("%.1e", dq));

  using mop::weights::TransitionKind;
  const double a[2] = {-0.5, 0.4}, b[2] = {-0.2, 0.9}, x[2] = {-0.3, 0.6};
  const double k1 = mop::weights::kmg_density(TransitionKind::brownian(), 0.35, 1.0, a, b, x);
  const double r1 = oracle::kmg2(oracle::brownian, 0.35, 1.0, a, b, x);
  const double pa[2] = {0.5, 1.5}, pb[2] = {0.3, 2.0}, px[2] = {0.8, 1.9};
  const auto besq = [](double t, double u, double v) { return oracle::besq(0.5, t, u, v); };
  const double k2 = mop::weights::kmg_density(TransitionKind::squared_bessel(0.5), 0.4, 1.1, pa, pb, px);
  const double r2 = oracle::kmg2(besq, 0.4, 1.1, pa, pb, px);
  const double dk = std::max(std::abs(k1 - r1) / std::abs(r1), std::abs(k2 - r2) / std::abs(r2));
  o.require(dk <= 1e-12, "kmg n=2 vs hand expansion = " + fmt("%.1e", dk));

  const double det = mop::numerics::fredholm_det([](double s, double t) { return std::sin(s) * std::sin(t); }, 0.0, 1.0, 20);
  const double df = std::abs(det - (1.0 - (0.5 - std::sin(2.0) / 4.0)));
  o.require(df <= 1e-10, "rank-one fredholm = " + fmt("%.1e", df));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "semicircle law", 30, semicircle_law},
      {2, "finite-n density vs equilibrium", 10, finite_n_density},
      {3, "kernel projector laws", 30, projector_laws},
      {4, "mop orthogonality", 10, mop_orthogonality},
      {5, "bulk universality trend", 60, bulk_universality},
      {6, "tracy-widom pipeline", 300, tracy_widom},
      {7, "pearcey cross-representation", 120, pearcey},
      {8, "external-source phases", 120, source_phases},
      {9, "two-matrix equilibrium", 120, two_matrix},
      {10, "sampler vs kernel", 120, sampler_vs_kernel},
      {11, "small-instance oracles", 10, small_oracles},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += "; runtime over budget of " + fmt("%.0f", c.budget_s) + " s";
    }
    std::printf("criterion %2d %-34s %s  (%.2f s)  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
