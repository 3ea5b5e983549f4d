#include "mop/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

#include "mop/error.hpp"

namespace mop::equilibrium {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

// Positive-side edges 0 = e_0 < ... < e_K = half_width.
std::vector<double> half_edges(const GridSpec& spec, double default_inner) {
  require(spec.cells >= 2 && spec.cells % 2 == 0, ErrorCode::invalid_argument,
          "grid cell count must be even and >= 2");
  require(spec.half_width > 0.0 && std::isfinite(spec.half_width), ErrorCode::invalid_argument,
          "grid half-width must be positive");
  const int K = spec.cells / 2;
  std::vector<double> e(static_cast<std::size_t>(K) + 1, 0.0);
  const double L = spec.half_width;
  if (spec.spacing == GridSpec::Spacing::uniform) {
    for (int k = 1; k <= K; ++k) e[k] = L * k / K;
    e[K] = L;
    return e;
  }
  const double h0 = spec.inner_width > 0.0 ? spec.inner_width : default_inner;
  require(h0 > 0.0, ErrorCode::invalid_argument, "graded grid needs a positive inner width");
  if (h0 * K >= L) {
    for (int k = 1; k <= K; ++k) e[k] = L * k / K;
    return e;
  }
  // Growth factor g with h0 (g^K - 1) / (g - 1) = L.
  const auto span = [&](double g) { return h0 * std::expm1(K * std::log(g)) / (g - 1.0); };
  double lo = 1.0 + 1e-15, hi = 2.0;
  while (span(hi) < L) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (span(mid) < L ? lo : hi) = mid;
  }
  const double g = 0.5 * (lo + hi);
  double w = h0;
  for (int k = 1; k <= K; ++k) {
    e[k] = e[k - 1] + w;
    w *= g;
  }
  e[K] = L;
  return e;
}

std::vector<double> symmetric_edges(const GridSpec& spec, double default_inner) {
  const auto h = half_edges(spec, default_inner);
  const std::size_t K = h.size() - 1;
  std::vector<double> edges(2 * K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    edges[K + k] = h[k];
    edges[K - k] = -h[k];
  }
  return edges;
}

DiscreteMeasure make_measure(Axis axis, std::vector<double> edges, double mass) {
  DiscreteMeasure mu;
  mu.axis = axis;
  mu.edges = std::move(edges);
  mu.total_mass = mass;
  mu.masses.assign(mu.edges.size() - 1, 0.0);
  return mu;
}

std::complex<double> position(const DiscreteMeasure& mu, int i) {
  const double c = mu.center(i);
  return mu.axis == Axis::real ? std::complex<double>(c, 0.0) : std::complex<double>(0.0, c);
}

void check_even_confining(const Polynomial& V) {
  require(V.is_confining(), ErrorCode::non_confining_potential,
          "V must have even degree >= 2 and a positive leading coefficient");
}

void check_even(const Polynomial& V) {
  require(V.is_even(), ErrorCode::invalid_argument, "V must be an even polynomial");
}

void finalize(EquilibriumProblem& p) {
  const int nm = static_cast<int>(p.measures.size());
  Eigen::LLT<Eigen::MatrixXd> llt(p.interaction);
  require(llt.info() == Eigen::Success, ErrorCode::invalid_argument,
          "interaction matrix is not positive definite");

  p.offsets.assign(static_cast<std::size_t>(nm) + 1, 0);
  for (int a = 0; a < nm; ++a) p.offsets[a + 1] = p.offsets[a] + p.measures[a].size();
  const int T = p.offsets[nm];
  p.hessian = Eigen::MatrixXd::Zero(T, T);
  for (int a = 0; a < nm; ++a) {
    for (int b = 0; b < nm; ++b) {
      const double c = p.interaction(a, b);
      if (c == 0.0) continue;
      const auto& ma = p.measures[a];
      const auto& mb = p.measures[b];
      for (int i = 0; i < ma.size(); ++i) {
        const auto zi = position(ma, i);
        for (int k = 0; k < mb.size(); ++k) {
          double l;
          if (a == b && i == k) {
            l = -(std::log(ma.width(i)) - 1.5);
          } else {
            l = -std::log(std::abs(zi - position(mb, k)));
          }
          p.hessian(p.offsets[a] + i, p.offsets[b] + k) = c * l;
        }
      }
    }
  }

  // Start: equal cell masses, projected onto the caps.
  for (auto& mu : p.measures) {
    const double total_cap =
        mu.has_cap() ? std::accumulate(mu.caps.begin(), mu.caps.end(), 0.0) : kInf;
    require(total_cap >= mu.total_mass, ErrorCode::infeasible_masses,
            "caps cannot hold the required mass");
    const std::vector<double> even(mu.masses.size(), mu.total_mass / mu.size());
    mu.masses = project(even, mu.caps, mu.total_mass);
  }
}

std::vector<double> flatten(const EquilibriumProblem& p, const std::vector<std::vector<double>>& m) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(p.cells()));
  for (const auto& v : m) x.insert(x.end(), v.begin(), v.end());
  return x;
}

double cap_of(const DiscreteMeasure& mu, int i) { return mu.has_cap() ? mu.caps[i] : kInf; }

}  // namespace

std::vector<bool> DiscreteMeasure::cap_active() const {
  std::vector<bool> out(masses.size(), false);
  if (!has_cap()) return out;
  for (std::size_t i = 0; i < masses.size(); ++i) out[i] = masses[i] >= caps[i] * (1.0 - 1e-9);
  return out;
}

EquilibriumProblem make_single_ep(const Polynomial& V, const GridSpec& grid) {
  check_even_confining(V);
  EquilibriumProblem p;
  p.kind = "single";
  p.measures.push_back(make_measure(Axis::real, symmetric_edges(grid, 0.0), 1.0));
  p.interaction = Eigen::MatrixXd::Identity(1, 1);
  std::vector<double> f(p.measures[0].masses.size());
  for (int i = 0; i < p.measures[0].size(); ++i) f[i] = V(p.measures[0].center(i));
  p.fields = {f};
  finalize(p);
  return p;
}

EquilibriumProblem make_source_ep(const Polynomial& V, double a, const GridSpec& grid, const GridSpec& aux) {
  check_even_confining(V);
  check_even(V);
  require(a > 0.0 && std::isfinite(a), ErrorCode::invalid_argument, "source strength a must be > 0");
  EquilibriumProblem p;
  p.kind = "source";
  auto mu1 = make_measure(Axis::real, symmetric_edges(grid, 0.0), 1.0);
  auto mu2 = make_measure(Axis::imaginary, symmetric_edges(aux, mu1.width(0)), 0.5);
  mu2.caps.resize(mu2.masses.size());
  for (int i = 0; i < mu2.size(); ++i) mu2.caps[i] = a / std::numbers::pi * mu2.width(i);
  std::vector<double> f1(mu1.masses.size());
  for (int i = 0; i < mu1.size(); ++i) {
    const double x = mu1.center(i);
    f1[i] = V(x) - a * std::abs(x);
  }
  p.fields = {f1, std::vector<double>(mu2.masses.size(), 0.0)};
  p.measures = {std::move(mu1), std::move(mu2)};
  p.interaction.resize(2, 2);
  p.interaction << 1.0, -0.5, -0.5, 1.0;
  finalize(p);
  return p;
}

EquilibriumProblem make_twomatrix_ep(const Polynomial& V, double tau, const GridSpec& grid,
                                     const GridSpec& aux) {
  check_even_confining(V);
  check_even(V);
  require(tau != 0.0 && std::isfinite(tau), ErrorCode::invalid_argument, "tau must be nonzero");
  EquilibriumProblem p;
  p.kind = "twomatrix";
  auto mu1 = make_measure(Axis::real, symmetric_edges(grid, 0.0), 1.0);
  auto mu2 = make_measure(Axis::imaginary, symmetric_edges(aux, mu1.width(0)), 2.0 / 3.0);
  auto mu3 = make_measure(Axis::real, symmetric_edges(aux, mu1.width(0)), 1.0 / 3.0);
  // Exact cell integral of sqrt(3)/(2 pi) |tau|^{4/3} |z|^{1/3}.
  const double c = std::sqrt(3.0) / (2.0 * std::numbers::pi) * std::pow(std::abs(tau), 4.0 / 3.0) * 0.75;
  mu2.caps.resize(mu2.masses.size());
  for (int i = 0; i < mu2.size(); ++i) {
    const double u = std::abs(mu2.edges[i]), v = std::abs(mu2.edges[i + 1]);
    mu2.caps[i] = c * std::abs(std::pow(v, 4.0 / 3.0) - std::pow(u, 4.0 / 3.0));
  }
  std::vector<double> f1(mu1.masses.size());
  for (int i = 0; i < mu1.size(); ++i) {
    const double x = mu1.center(i);
    f1[i] = V(x) - 0.75 * std::pow(std::abs(tau * x), 4.0 / 3.0);
  }
  p.fields = {f1, std::vector<double>(mu2.masses.size(), 0.0), std::vector<double>(mu3.masses.size(), 0.0)};
  p.measures = {std::move(mu1), std::move(mu2), std::move(mu3)};
  p.interaction.resize(3, 3);
  p.interaction << 1.0, -0.5, 0.0, -0.5, 1.0, -0.5, 0.0, -0.5, 1.0;
  finalize(p);
  return p;
}

std::vector<double> project(const std::vector<double>& v, const std::vector<double>& caps, double M) {
  const std::size_t N = v.size();
  require(N > 0, ErrorCode::empty_input, "cannot project an empty vector");
  require(caps.empty() || caps.size() == N, ErrorCode::invalid_argument, "caps size mismatch");
  const auto cap = [&](std::size_t i) { return caps.empty() ? kInf : caps[i]; };
  const auto fill = [&](double lambda, std::vector<double>& out) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = std::clamp(v[i] - lambda, 0.0, cap(i));
      s += out[i];
    }
    return s;
  };
  double hi = *std::max_element(v.begin(), v.end());
  double lo = kInf;
  for (std::size_t i = 0; i < N; ++i) lo = std::min(lo, caps.empty() ? v[i] - M : v[i] - cap(i));
  std::vector<double> out(N);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (fill(mid, out) > M ? lo : hi) = mid;
  }
  fill(0.5 * (lo + hi), out);

  // Put the rounding residue on the free cells so the mass is exact.
  for (int pass = 0; pass < 3; ++pass) {
    const double s = std::accumulate(out.begin(), out.end(), 0.0);
    const double diff = M - s;
    if (diff == 0.0) break;
    std::size_t nfree = 0;
    for (std::size_t i = 0; i < N; ++i)
      if (out[i] > 0.0 && out[i] < cap(i)) ++nfree;
    if (nfree == 0) break;
    const double share = diff / static_cast<double>(nfree);
    for (std::size_t i = 0; i < N; ++i)
      if (out[i] > 0.0 && out[i] < cap(i)) out[i] = std::clamp(out[i] + share, 0.0, cap(i));
  }
  return out;
}

double energy(const EquilibriumProblem& problem, const std::vector<std::vector<double>>& masses) {
  require(masses.size() == problem.measures.size(), ErrorCode::infeasible_masses, "wrong number of measures");
  for (std::size_t a = 0; a < masses.size(); ++a) {
    const auto& mu = problem.measures[a];
    require(static_cast<int>(masses[a].size()) == mu.size(), ErrorCode::infeasible_masses,
            "mass vector does not match the grid");
    double s = 0.0;
    for (int i = 0; i < mu.size(); ++i) {
      const double m = masses[a][i];
      require(m >= -1e-12 && m <= cap_of(mu, i) + 1e-12, ErrorCode::infeasible_masses,
              "cell mass outside [0, cap]");
      s += m;
    }
    require(std::abs(s - mu.total_mass) <= 1e-9 * std::max(1.0, mu.total_mass), ErrorCode::infeasible_masses,
            "total mass differs from its target");
  }
  const auto x = flatten(problem, masses);
  const auto f = flatten(problem, problem.fields);
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  return xv.dot(problem.hessian * xv) + fv.dot(xv);
}

Solution minimize(const EquilibriumProblem& problem, const SolverOptions& options) {
  const int nm = static_cast<int>(problem.measures.size());
  const int T = problem.cells();
  std::vector<std::vector<double>> start;
  for (const auto& mu : problem.measures) start.push_back(mu.masses);
  const auto fvec = flatten(problem, problem.fields);
  Eigen::Map<const Eigen::VectorXd> f(fvec.data(), T);
  const Eigen::MatrixXd& H = problem.hessian;

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(flatten(problem, start).data(), T);
  Eigen::VectorXd Hx = H * x;
  double E = x.dot(Hx) + f.dot(x);
  Eigen::VectorXd g = 2.0 * Hx + f;

  Diagnostics diag;
  diag.initial_energy = E;
  if (options.record_history) diag.energy_history.push_back(E);

  const auto project_all = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(T);
    for (int a = 0; a < nm; ++a) {
      const auto& mu = problem.measures[a];
      std::vector<double> seg(v.data() + problem.offsets[a], v.data() + problem.offsets[a + 1]);
      const auto pr = project(seg, mu.caps, mu.total_mass);
      for (int i = 0; i < mu.size(); ++i) out(problem.offsets[a] + i) = pr[i];
    }
    return out;
  };
  const auto track_feasibility = [&](const Eigen::VectorXd& v) {
    for (int a = 0; a < nm; ++a) {
      const auto& mu = problem.measures[a];
      double s = 0.0;
      for (int i = 0; i < mu.size(); ++i) {
        const double m = v(problem.offsets[a] + i);
        s += m;
        diag.max_cap_violation = std::max({diag.max_cap_violation, -m, m - cap_of(mu, i)});
      }
      diag.max_mass_defect = std::max(diag.max_mass_defect, std::abs(s - mu.total_mass));
    }
  };
  const auto stationarity = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& grad) {
    return (v - project_all(v - grad)).lpNorm<Eigen::Infinity>();
  };

  // g shifted by a per-measure multiplier estimate (mean over free cells).
  // Feasible steps have zero sum per measure, so g.d is unchanged in exact
  // arithmetic but no longer cancels in floating point.
  const auto centered = [&](const Eigen::VectorXd& grad, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = grad;
    for (int a = 0; a < nm; ++a) {
      const auto& mu = problem.measures[a];
      double s = 0.0;
      int count = 0;
      for (int i = 0; i < mu.size(); ++i) {
        const double m = v(problem.offsets[a] + i);
        if (m > 0.0 && m < cap_of(mu, i)) {
          s += grad(problem.offsets[a] + i);
          ++count;
        }
      }
      if (count > 0) out.segment(problem.offsets[a], mu.size()).array() -= s / count;
    }
    return out;
  };

  track_feasibility(x);
  double eta = 1.0 / std::max(1.0, 2.0 * H.diagonal().cwiseAbs().maxCoeff());
  int it = 0;
  double res = stationarity(x, g);
  while (res >= options.tol && it < options.max_iters) {
    Eigen::VectorXd xn, Hd;
    double dE = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      xn = project_all(x - eta * g);
      const Eigen::VectorXd d = xn - x;
      Hd = H * d;
      // Exact increment; E itself is too large to resolve the late steps.
      const double curv = d.dot(Hd);
      dE = centered(g, x).dot(d) + curv;
      if (curv <= d.squaredNorm() / (2.0 * eta) && dE <= 0.0) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no representable descent left
    const double En = E + dE;
    const Eigen::VectorXd Hxn = Hx + Hd;
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd gn = 2.0 * Hxn + f;
    const double sy = 2.0 * s.dot(Hd);
    eta = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : 2.0 * eta;
    x = std::move(xn);
    Hx = std::move(Hxn);
    g = gn;
    E = En;
    ++it;
    track_feasibility(x);
    if (options.record_history) diag.energy_history.push_back(E);
    res = stationarity(x, g);
  }

  diag.converged = res < options.tol;
  diag.iterations = it;
  diag.energy = E;
  diag.stationarity = res;

  Solution sol;
  sol.measures = problem.measures;
  for (int a = 0; a < nm; ++a) {
    auto& mu = sol.measures[a];
    for (int i = 0; i < mu.size(); ++i) mu.masses[i] = x(problem.offsets[a] + i);
    const int N = mu.size();
    for (int i = 0; i < N; ++i)
      diag.symmetry_defect = std::max(diag.symmetry_defect, std::abs(mu.masses[i] - mu.masses[N - 1 - i]));
    diag.boundary_mass = std::max({diag.boundary_mass, mu.masses.front(), mu.masses.back()});
  }
  diag.boundary_warning = diag.boundary_mass >= 1e-6;
  sol.diagnostics = std::move(diag);
  return sol;
}

std::vector<Interval> support_gap(const DiscreteMeasure& mu, double threshold) {
  require(threshold > 0.0, ErrorCode::invalid_argument, "gap threshold must be > 0");
  double peak = 0.0;
  for (int i = 0; i < mu.size(); ++i) peak = std::max(peak, mu.density(i));
  std::vector<Interval> out;
  int i = 0;
  while (i < mu.size()) {
    if (mu.density(i) <= threshold * peak) {
      int j = i;
      while (j + 1 < mu.size() && mu.density(j + 1) <= threshold * peak) ++j;
      out.push_back({mu.edges[i], mu.edges[j + 1]});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace mop::equilibrium
