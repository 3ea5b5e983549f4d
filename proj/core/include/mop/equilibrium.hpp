#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mop/polynomial.hpp"

namespace mop::equilibrium {

enum class Axis { real, imaginary };

// Symmetric cell grid with 0 on a cell boundary. Uniform grids have equal
// cells on [-half_width, half_width]; graded grids grow geometrically away
// from 0, starting at inner_width (0 means: match the first measure's cell).
struct GridSpec {
  enum class Spacing { uniform, graded };
  int cells = 400;
  double half_width = 2.5;
  Spacing spacing = Spacing::uniform;
  double inner_width = 0.0;

  static GridSpec uniform(int cells, double half_width) { return {cells, half_width, Spacing::uniform, 0.0}; }
  static GridSpec graded(int cells, double half_width, double inner_width = 0.0) {
    return {cells, half_width, Spacing::graded, inner_width};
  }
};

// Default grid for measures living on an unbounded axis (1/|z|^2 tails).
inline GridSpec default_unbounded_grid() { return GridSpec::graded(400, 1e8); }

struct DiscreteMeasure {
  Axis axis = Axis::real;
  std::vector<double> edges;    // cells + 1 increasing coordinates (imaginary part on i R)
  std::vector<double> masses;
  std::vector<double> caps;     // empty when unconstrained
  double total_mass = 1.0;

  int size() const noexcept { return static_cast<int>(masses.size()); }
  double center(int i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double width(int i) const { return edges[i + 1] - edges[i]; }
  double density(int i) const { return masses[i] / width(i); }
  bool has_cap() const noexcept { return !caps.empty(); }
  // Cells whose mass sits on the cap (relative tolerance 1e-9).
  std::vector<bool> cap_active() const;
};

struct EquilibriumProblem {
  std::string kind;                       // single, source or twomatrix
  std::vector<DiscreteMeasure> measures;  // templates; masses hold the start point
  Eigen::MatrixXd interaction;            // diagonal 1, consecutive couplings -1/2
  std::vector<std::vector<double>> fields;
  Eigen::MatrixXd hessian;                // interaction (x) log kernel, all cells
  std::vector<int> offsets;               // first row of each measure in `hessian`

  int cells() const noexcept { return static_cast<int>(hessian.rows()); }
};

// Logarithmic energy with external field V; one unit measure on R.
EquilibriumProblem make_single_ep(const Polynomial& V, const GridSpec& grid = {});

// mu_1 on R (mass 1, field V - a|x|) and mu_2 on iR (mass 1/2, cap a/pi per
// unit length).
EquilibriumProblem make_source_ep(const Polynomial& V, double a,
                                  const GridSpec& grid = GridSpec::uniform(400, 4.5),
                                  const GridSpec& aux = default_unbounded_grid());

// mu_1 on R (mass 1, field V - 3/4 |tau x|^{4/3}), mu_2 on iR (mass 2/3, cap
// density sqrt(3)/(2 pi) |tau|^{4/3} |z|^{1/3}), mu_3 on R (mass 1/3).
EquilibriumProblem make_twomatrix_ep(const Polynomial& V, double tau,
                                     const GridSpec& grid = GridSpec::uniform(400, 3.5),
                                     const GridSpec& aux = default_unbounded_grid());

// sum_ab C_ab m_a^T L_ab m_b + sum_a f_a . m_a, with L the cell-averaged
// logarithmic kernel. Throws infeasible-masses for masses off the feasible set.
double energy(const EquilibriumProblem& problem, const std::vector<std::vector<double>>& masses);

// Euclidean projection of v onto {0 <= m <= cap, sum m = M}.
std::vector<double> project(const std::vector<double>& v, const std::vector<double>& caps, double M);

struct SolverOptions {
  int max_iters = 5000;
  double tol = 1e-9;
  bool record_history = true;
};

struct Diagnostics {
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;
  double stationarity = 0.0;          // |m - P(m - grad E)|_inf
  double initial_energy = 0.0;
  double max_mass_defect = 0.0;       // worst |sum m - M| over all iterates
  double max_cap_violation = 0.0;     // worst max(0, -m, m - cap) over all iterates
  double symmetry_defect = 0.0;       // |m_i - m_{N-1-i}|_inf over all measures
  double boundary_mass = 0.0;         // largest mass in an outermost cell
  bool boundary_warning = false;      // boundary_mass >= 1e-6
  std::vector<double> energy_history;  // one entry per accepted iterate, starting point first
};

struct Solution {
  std::vector<DiscreteMeasure> measures;
  Diagnostics diagnostics;
};

// Projected gradient with Barzilai-Borwein steps and a monotone backtracking
// line search. Starts from the problem's template masses. Never throws on
// non-convergence; check diagnostics.converged.
Solution minimize(const EquilibriumProblem& problem, const SolverOptions& options = {});

struct Interval {
  double lo;
  double hi;
};

// Maximal runs of cells with density <= threshold * peak density.
std::vector<Interval> support_gap(const DiscreteMeasure& mu, double threshold = 1e-3);

}  // namespace mop::equilibrium
