#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include "cli.hpp"
#include "mop/csv.hpp"
#include "mop/equilibrium.hpp"
#include "mop/error.hpp"
#include "mop/limit_kernels.hpp"
#include "mop/mop_kernel.hpp"
#include "mop/sampling.hpp"
#include "mop/weights.hpp"

namespace mopctl {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw mop::Error(mop::ErrorCode::io_error, "cannot write " + path.string());
  return f;
}

template <class F>
void parallel_for(int count, int workers, F&& fn) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < count; i += workers) fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  if (count > 1) v.back() = hi;
  return v;
}

int positive(const Knobs& k, const std::string& name) {
  const long v = k.integer(name);
  if (v < 1 || v > 100000000) throw ConfigError("--" + name + " must be a positive integer");
  return static_cast<int>(v);
}

std::string choice(const Knobs& k, const std::string& name, const std::vector<std::string>& allowed) {
  const std::string& v = k.str(name);
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError("--" + name + " must be one of: " + list + " (got '" + v + "')");
  }
  return v;
}

// ---------------------------------------------------------------- families

void add_family_knobs(CLI::App* app, Knobs& k) {
  k.add(app, "family", "gue", "Weight family: gue, hermite, source, multiple-hermite, bessel, two-matrix, tabulated");
  k.add(app, "n", "30", "Ensemble size |nu| when --nu is auto");
  k.add(app, "nu", "auto", "Multi-index, comma separated; auto = the family's default split of --n");
  k.add(app, "scale", "auto", "Scale n in e^{-nV}; auto = |nu| (1 for hermite)");
  k.add(app, "V", "0,0,0.5", "Potential coefficients, ascending powers");
  k.add(app, "a", "2", "Source strength (source) or start point (bessel)");
  k.add(app, "a-list", "1,-1", "Endpoint list a_j for multiple-hermite");
  k.add(app, "t", "0.5", "Time t (multiple-hermite, bessel)");
  k.add(app, "T", "1", "Final time T (multiple-hermite, bessel)");
  k.add(app, "alpha", "0", "Squared Bessel order alpha > -1");
  k.add(app, "tau", "1", "Two-matrix coupling tau != 0");
  k.add(app, "weights-csv", "none", "CSV file x,w1,...,wr for the tabulated family");
  k.add(app, "nodes", "auto", "Quadrature nodes on the working interval; auto = 160 + 6|nu|");
  k.add(app, "condition-limit", "1e12", "Largest accepted condition estimate");
}

struct FamilyChoice {
  std::string name;
  mop::weights::WeightFamily family;
  mop::kernel::MultiIndex nu;
};

FamilyChoice make_family(const Knobs& k) {
  using mop::Polynomial;
  using mop::weights::WeightFamily;
  const std::string name =
      choice(k, "family", {"gue", "hermite", "source", "multiple-hermite", "bessel", "two-matrix", "tabulated"});
  std::vector<int> nu_entries;
  int total;
  if (k.is_auto("nu")) {
    total = positive(k, "n");
  } else {
    nu_entries = k.integers("nu");
    total = 0;
    for (int e : nu_entries) {
      if (e < 0) throw ConfigError("--nu entries must be >= 0");
      total += e;
    }
  }
  int scale = name == "hermite" ? 1 : std::max(total, 1);
  if (!k.is_auto("scale")) scale = positive(k, "scale");

  const auto build = [&]() -> WeightFamily {
    if (name == "gue") return WeightFamily::external_source(scale, Polynomial({0.0, 0.0, 0.5}), {0.0});
    if (name == "hermite") return WeightFamily::external_source(scale, Polynomial({0.0, 0.0, 1.0}), {0.0});
    if (name == "source") {
      const double a = k.real("a");
      return WeightFamily::external_source(scale, Polynomial(k.reals("V")), {a, -a});
    }
    if (name == "multiple-hermite") return WeightFamily::multiple_hermite(scale, k.real("t"), k.real("T"), k.reals("a-list"));
    if (name == "bessel")
      return WeightFamily::squared_bessel_pair(scale, k.real("alpha"), k.real("a"), k.real("t"), k.real("T"));
    if (name == "two-matrix") return WeightFamily::two_matrix_induced(scale, Polynomial(k.reals("V")), k.real("tau"));
    if (k.str("weights-csv") == "none") throw ConfigError("--weights-csv is required for the tabulated family");
    std::ifstream in(k.str("weights-csv"));
    if (!in) throw ConfigError("cannot open --weights-csv '" + k.str("weights-csv") + "'");
    return WeightFamily::tabulated_from_csv(scale, in);
  };
  WeightFamily fam = [&] {
    try {
      return build();
    } catch (const mop::Error& e) {
      if (mop::is_numerical_degeneracy(e.code())) throw;
      throw ConfigError(e.what());
    }
  }();
  if (nu_entries.empty()) nu_entries = fam.default_multi_index(total);
  if (static_cast<int>(nu_entries.size()) != fam.size())
    throw ConfigError("--nu needs " + std::to_string(fam.size()) + " entries for family " + name);
  return {name, std::move(fam), {nu_entries}};
}

mop::numerics::QuadratureRule family_rule(const Knobs& k, const FamilyChoice& f) {
  const int nodes = k.is_auto("nodes") ? 0 : positive(k, "nodes");
  return mop::kernel::working_rule(f.family, f.nu, nodes);
}

}  // namespace

void write_json(const std::filesystem::path& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- equilibrium

void add_equilibrium_knobs(CLI::App* app, Knobs& k) {
  k.add(app, "kind", "", "Problem: single, source or twomatrix");
  k.add(app, "V", "0,0,0.5", "Potential coefficients, ascending powers (even, confining)");
  k.add(app, "a", "2", "Source strength a > 0 (source)");
  k.add(app, "tau", "1", "Coupling tau != 0 (twomatrix)");
  k.add(app, "grid", "400", "Cells of the first measure (even)");
  k.add(app, "half-width", "auto", "Half-width of the first grid; auto = 2.5 / 4.5 / 3.5 for single / source / twomatrix");
  k.add(app, "aux-cells", "400", "Cells of each measure on an unbounded axis (even)");
  k.add(app, "aux-half-width", "1e8", "Truncation radius of the unbounded grids");
  k.add(app, "aux-inner-width", "auto", "Innermost cell width of the unbounded grids; auto = first grid's cell");
  k.add(app, "max-iters", "5000", "Iteration limit");
  k.add(app, "tol", "1e-9", "Stationarity tolerance |m - P(m - grad E)|_inf");
  k.add(app, "gap-threshold", "1e-3", "Gap detection: density below this fraction of the peak");
}

int cmd_equilibrium(Context& ctx) {
  namespace eq = mop::equilibrium;
  const Knobs& k = ctx.knobs;
  const std::string kind = choice(k, "kind", {"single", "source", "twomatrix"});
  const double default_half = kind == "single" ? 2.5 : kind == "source" ? 4.5 : 3.5;
  const double half = k.is_auto("half-width") ? default_half : k.real("half-width");
  const auto grid = eq::GridSpec::uniform(positive(k, "grid"), half);
  const auto aux = eq::GridSpec::graded(positive(k, "aux-cells"), k.real("aux-half-width"),
                                        k.is_auto("aux-inner-width") ? 0.0 : k.real("aux-inner-width"));
  eq::SolverOptions opts;
  opts.max_iters = positive(k, "max-iters");
  opts.tol = k.real("tol");
  const double threshold = k.real("gap-threshold");
  if (!(opts.tol > 0.0) || !(threshold > 0.0)) throw ConfigError("--tol and --gap-threshold must be > 0");

  const mop::Polynomial V(k.reals("V"));
  eq::EquilibriumProblem problem = [&] {
    try {
      if (kind == "single") return eq::make_single_ep(V, grid);
      if (kind == "source") return eq::make_source_ep(V, k.real("a"), grid, aux);
      return eq::make_twomatrix_ep(V, k.real("tau"), grid, aux);
    } catch (const mop::Error& e) {
      throw ConfigError(e.what());
    }
  }();
  const eq::Solution sol = eq::minimize(problem, opts);
  const auto& d = sol.diagnostics;

  json measures = json::array();
  bool gap_flagged = false;
  for (std::size_t a = 0; a < sol.measures.size(); ++a) {
    const auto& mu = sol.measures[a];
    const std::string file = "mu" + std::to_string(a + 1) + ".csv";
    auto f = open_out(ctx.file(file));
    mop::csv::Writer w(f, {"coordinate", "density", "cap_active"});
    const auto active = mu.cap_active();
    int active_cells = 0;
    for (int i = 0; i < mu.size(); ++i) {
      w << mu.center(i) << mu.density(i) << (active[i] ? 1 : 0);
      w.end_row();
      active_cells += active[i];
    }
    json gaps = json::array();
    bool around_zero = false;
    for (const auto& g : eq::support_gap(mu, threshold)) {
      gaps.push_back({g.lo, g.hi});
      // Interior gaps only: a run touching the grid boundary is outside the support.
      if (g.lo <= 0.0 && g.hi >= 0.0 && g.lo > mu.edges.front() && g.hi < mu.edges.back()) around_zero = true;
    }
    if (a == 0) gap_flagged = around_zero;
    measures.push_back({{"file", file},
                        {"axis", mu.axis == eq::Axis::real ? "real" : "imaginary"},
                        {"mass", mu.total_mass},
                        {"cells", mu.size()},
                        {"capped", mu.has_cap()},
                        {"cap_active_cells", active_cells},
                        {"gaps", gaps},
                        {"gap_around_zero", around_zero}});
  }
  json diag{{"kind", kind},
            {"converged", d.converged},
            {"iterations", d.iterations},
            {"energy", d.energy},
            {"initial_energy", d.initial_energy},
            {"stationarity", d.stationarity},
            {"symmetry_defect", d.symmetry_defect},
            {"max_mass_defect", d.max_mass_defect},
            {"boundary_mass", d.boundary_mass},
            {"boundary_warning", d.boundary_warning},
            {"gap_flagged", gap_flagged},
            {"measures", measures}};
  write_json(ctx.file("diagnostics.json"), diag);
  if (d.boundary_warning)
    ctx.err << "warning: outermost cell holds mass " << d.boundary_mass << "; consider a wider grid\n";
  if (!d.converged) {
    ctx.err << "error: no stationary point within " << opts.max_iters << " iterations (residual "
            << d.stationarity << ")\n";
    return exit_not_converged;
  }
  return exit_ok;
}

// ---------------------------------------------------------------- kernel

void add_kernel_knobs(CLI::App* app, Knobs& k) {
  k.add(app, "kind", "", "Kernel: finite-n, sine, airy, pearcey or tracy-widom");
  add_family_knobs(app, k);
  k.add(app, "points", "201", "finite-n: density samples across the working interval");
  k.add(app, "grid", "auto", "Points per axis of the x,y grid; auto = 5 (pearcey) or 41 (sine, airy)");
  k.add(app, "range", "-3:3", "x and y range lo:hi of the grid");
  k.add(app, "b", "0", "Pearcey parameter b");
  k.add(app, "R", "6", "Pearcey contour ray length");
  k.add(app, "m-c", "64", "Pearcey Gauss-Legendre nodes per ray (>= 16)");
  k.add(app, "delta", "0.5", "Pearcey offset of the t-contour apexes from 0");
  k.add(app, "t-grid", "-6:4:0.1", "Tracy-Widom abscissae lo:hi:step");
  k.add(app, "m", "60", "Tracy-Widom Nystrom nodes (>= 16)");
  k.add(app, "L", "12", "Tracy-Widom truncation length of (t, inf)");
}

int cmd_kernel(Context& ctx) {
  const Knobs& k = ctx.knobs;
  const std::string kind = choice(k, "kind", {"finite-n", "sine", "airy", "pearcey", "tracy-widom"});

  if (kind == "finite-n") {
    const FamilyChoice f = make_family(k);
    const auto rule = family_rule(k, f);
    const auto K = mop::kernel::build_kernel(f.family, f.nu, rule, k.real("condition-limit"));
    const auto iv = K.interval();
    const int points = std::max(2, positive(k, "points"));
    const auto xs = linspace(iv.lo, iv.hi, points);
    std::vector<double> ys(xs.size());
    // Open-support families are not evaluable exactly at a closed end.
    const auto sup = f.family.support();
    parallel_for(points, ctx.workers, [&](int i) {
      double x = xs[i];
      if (!sup.contains(x)) x = std::clamp(std::nextafter(x, 0.5 * (iv.lo + iv.hi)), iv.lo, iv.hi);
      ys[i] = mop::kernel::mean_density(K, x);
    });
    auto out = open_out(ctx.file("density.csv"));
    mop::csv::Writer w(out, {"x", "density"});
    for (std::size_t i = 0; i < xs.size(); ++i) {
      w << xs[i] << ys[i];
      w.end_row();
    }
    json summary{{"kind", kind},
                 {"family", f.name},
                 {"nu", f.nu.entries},
                 {"n", K.n()},
                 {"scale", f.family.scale()},
                 {"interval", {iv.lo, iv.hi}},
                 {"nodes", rule.size()},
                 {"condition", K.condition()},
                 {"density_integral", K.trace() / K.n()}};
    write_json(ctx.file("kernel.json"), summary);
    return exit_ok;
  }

  if (kind == "tracy-widom") {
    const auto r = parse_range("t-grid", k.str("t-grid"), true);
    const int m = positive(k, "m");
    const double L = k.real("L");
    std::vector<double> ts;
    const long steps = std::lround(std::floor((r[1] - r[0]) / r[2] + 1e-9));
    if (steps > 1000000) throw ConfigError("--t-grid has too many points");
    for (long i = 0; i <= steps; ++i) ts.push_back(r[0] + static_cast<double>(i) * r[2]);
    std::vector<double> F(ts.size());
    parallel_for(static_cast<int>(ts.size()), ctx.workers, [&](int i) {
      F[i] = ts[i] < -10.0 ? 0.0 : mop::limits::tracy_widom_cdf(ts[i], m, L);
    });
    auto out = open_out(ctx.file("tracy_widom.csv"));
    mop::csv::Writer w(out, {"t", "F"});
    bool monotone = true;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      w << ts[i] << F[i];
      w.end_row();
      if (i > 0 && F[i] < F[i - 1]) monotone = false;
    }
    write_json(ctx.file("kernel.json"), {{"kind", kind}, {"points", ts.size()}, {"monotone", monotone}});
    return exit_ok;
  }

  const auto r = parse_range("range", k.str("range"), false);
  const int grid = k.is_auto("grid") ? (kind == "pearcey" ? 5 : 41) : positive(k, "grid");
  const auto axis = linspace(r[0], r[1], grid);
  const int cells = grid * grid;

  if (kind == "pearcey") {
    mop::limits::PearceyParams p;
    p.b = k.real("b");
    p.R = k.real("R");
    p.m_c = positive(k, "m-c");
    p.delta = k.real("delta");
    std::vector<double> vi(static_cast<std::size_t>(cells)), vo(vi.size());
    parallel_for(cells, ctx.workers, [&](int c) {
      const double x = axis[c / grid], y = axis[c % grid];
      vi[c] = mop::limits::pearcey_kernel_int(x, y, p);
      vo[c] = mop::limits::pearcey_kernel_ode(x, y, p);
    });
    auto out = open_out(ctx.file("pearcey.csv"));
    mop::csv::Writer w(out, {"x", "y", "int", "ode", "abs_diff"});
    double max_diff = 0.0, max_rel = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double diff = std::abs(vi[c] - vo[c]);
      max_diff = std::max(max_diff, diff);
      max_rel = std::max(max_rel, diff / std::max(std::abs(vo[c]), 1e-300));
      w << axis[c / grid] << axis[c % grid] << vi[c] << vo[c] << diff;
      w.end_row();
    }
    write_json(ctx.file("kernel.json"),
               {{"kind", kind}, {"b", p.b}, {"grid", grid}, {"max_diff", max_diff}, {"max_rel_diff", max_rel}});
    return exit_ok;
  }

  std::vector<double> v(static_cast<std::size_t>(cells));
  parallel_for(cells, ctx.workers, [&](int c) {
    const double x = axis[c / grid], y = axis[c % grid];
    v[c] = kind == "sine" ? mop::limits::sine_kernel(x, y) : mop::limits::airy_kernel(x, y);
  });
  auto out = open_out(ctx.file("kernel.csv"));
  mop::csv::Writer w(out, {"x", "y", "value"});
  for (int c = 0; c < cells; ++c) {
    w << axis[c / grid] << axis[c % grid] << v[c];
    w.end_row();
  }
  write_json(ctx.file("kernel.json"), {{"kind", kind}, {"grid", grid}});
  return exit_ok;
}

// ---------------------------------------------------------------- sample

void add_sample_knobs(CLI::App* app, Knobs& k) {
  k.add(app, "ensemble", "", "Ensemble: gue, source or nibm");
  k.add(app, "n", "50", "Matrix size (even for source and nibm)");
  k.add(app, "a", "2", "Source strength (source) or bridge start point (nibm)");
  k.add(app, "t", "0.5", "Bridge time in (0, 1) (nibm)");
  k.add(app, "batches", "100", "Number of independent samples");
  k.add(app, "seed", "1", "Generator seed");
  k.add(app, "bins", "40", "Histogram bins");
  k.add(app, "range", "auto", "Histogram range lo:hi; auto = pooled min:max");
  k.add(app, "largest-cdf", "false", "Also write the scaled largest-eigenvalue CDF (needs >= 200 samples)");
  k.add(app, "edge-c", "1", "Constant c in c n^{2/3} (lambda_max - 2)");
}

int cmd_sample(Context& ctx) {
  namespace sm = mop::sampling;
  const Knobs& k = ctx.knobs;
  const std::string ens = choice(k, "ensemble", {"gue", "source", "nibm"});
  sm::EnsembleSpec spec;
  spec.kind = ens == "gue" ? sm::Ensemble::gue : ens == "source" ? sm::Ensemble::source : sm::Ensemble::nibm;
  spec.n = positive(k, "n");
  spec.a = k.real("a");
  spec.t = k.real("t");
  const int count = positive(k, "batches");
  const long seed = k.integer("seed");
  if (seed < 0) throw ConfigError("--seed must be >= 0");
  const int bins = positive(k, "bins");
  const std::string largest = choice(k, "largest-cdf", {"true", "false"});

  std::vector<sm::SpectralSample> samples;
  try {
    samples = sm::sample_batch(spec, count, static_cast<std::uint64_t>(seed), ctx.workers);
  } catch (const mop::Error& e) {
    if (mop::is_numerical_degeneracy(e.code())) throw;
    throw ConfigError(e.what());
  }

  {
    auto out = open_out(ctx.file("samples.csv"));
    mop::csv::Writer w(out, {"sample_id", "eigenvalue_index", "value"});
    for (const auto& s : samples)
      for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        w << static_cast<std::int64_t>(s.batch) << static_cast<std::int64_t>(i) << s.eigenvalues[i];
        w.end_row();
      }
  }

  double lo, hi;
  if (k.is_auto("range")) {
    lo = samples.front().eigenvalues.front();
    hi = samples.front().eigenvalues.back();
    for (const auto& s : samples) {
      lo = std::min(lo, s.eigenvalues.front());
      hi = std::max(hi, s.eigenvalues.back());
    }
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  } else {
    const auto r = parse_range("range", k.str("range"), false);
    lo = r[0];
    hi = r[1];
  }
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
  edges.back() = hi;
  const auto h = sm::empirical_density(samples, edges);
  {
    auto out = open_out(ctx.file("histogram.csv"));
    mop::csv::Writer w(out, {"bin_lo", "bin_hi", "density"});
    for (int i = 0; i < h.bins(); ++i) {
      w << h.edges[i] << h.edges[i + 1] << h.value(i);
      w.end_row();
    }
  }

  json summary{{"ensemble", ens},
               {"n", spec.n},
               {"samples", count},
               {"seed", seed},
               {"histogram_outside", h.outside}};
  if (spec.kind == sm::Ensemble::nibm) {
    const auto& m = samples.front().map;
    summary["affine_map"] = {{"x", "scale * y"}, {"scale", m.scale}, {"alpha", m.alpha}};
  }
  if (largest == "true") {
    sm::EdgeScaling sc;
    sc.c = k.real("edge-c");
    sm::EmpiricalCdf cdf;
    try {
      cdf = sm::largest_eigenvalue_cdf(samples, sc);
    } catch (const mop::Error& e) {
      throw ConfigError(e.what());
    }
    auto out = open_out(ctx.file("largest_eigenvalue.csv"));
    mop::csv::Writer w(out, {"s", "empirical_cdf"});
    for (std::size_t i = 0; i < cdf.points.size(); ++i) {
      w << cdf.points[i] << static_cast<double>(i + 1) / static_cast<double>(cdf.points.size());
      w.end_row();
    }
    summary["ks_distance"] = cdf.ks_distance;
    summary["ks_location"] = cdf.ks_location;
  }
  write_json(ctx.file("sample.json"), summary);
  return exit_ok;
}

// ---------------------------------------------------------------- mop

void add_mop_knobs(CLI::App* app, Knobs& k) { add_family_knobs(app, k); }

int cmd_mop(Context& ctx) {
  const Knobs& k = ctx.knobs;
  const FamilyChoice f = make_family(k);
  const auto rule = family_rule(k, f);
  const auto P = mop::kernel::compute_mop(f.family, f.nu, rule, k.real("condition-limit"));
  const auto res = mop::kernel::mop_residuals(P, f.family, f.nu, rule);
  const auto coeffs = P.monomial_coefficients();
  {
    auto out = open_out(ctx.file("coefficients.csv"));
    mop::csv::Writer w(out, {"degree", "coefficient"});
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      w << static_cast<std::int64_t>(d) << coeffs[d];
      w.end_row();
    }
  }
  double worst = 0.0;
  {
    auto out = open_out(ctx.file("residuals.csv"));
    mop::csv::Writer w(out, {"weight", "power", "residual"});
    std::size_t i = 0;
    for (int kk = 0; kk < f.nu.size(); ++kk)
      for (int j = 0; j < f.nu.entries[kk]; ++j, ++i) {
        w << kk + 1 << j << res[i];
        w.end_row();
        worst = std::max(worst, std::abs(res[i]));
      }
  }
  write_json(ctx.file("mop.json"), {{"family", f.name},
                                    {"nu", f.nu.entries},
                                    {"degree", P.degree},
                                    {"scale", f.family.scale()},
                                    {"interval", {rule.lo, rule.hi}},
                                    {"nodes", rule.size()},
                                    {"condition", P.condition},
                                    {"max_residual", worst}});
  return exit_ok;
}

}  // namespace mopctl
