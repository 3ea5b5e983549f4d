#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mop::sampling {

enum class Ensemble { gue, source, nibm };

std::string to_string(Ensemble e);

struct EnsembleSpec {
  Ensemble kind = Ensemble::gue;
  int n = 1;
  double a = 0.0;  // source strength (source) or start point (nibm)
  double t = 0.5;  // nibm time, T = 1
};

// Affine map taking external-source eigenvalues y (V = y^2/2, A = diag(+-alpha))
// to bridge positions x = scale * y.
struct AffineMap {
  double scale = 1.0;
  double alpha = 0.0;
};

struct SpectralSample {
  EnsembleSpec descriptor;
  std::uint64_t seed = 0;
  std::uint64_t batch = 0;  // substream index
  AffineMap map;            // identity except for nibm
  std::vector<double> eigenvalues;  // ascending

  int n() const noexcept { return descriptor.n; }
};

// GUE with density proportional to exp(-n/2 Tr H^2): diagonal N(0, 1/n),
// off-diagonal real and imaginary parts N(0, 1/(2n)).
SpectralSample sample_gue(int n, std::uint64_t seed, std::uint64_t batch = 0);

// A + H with A = diag(a,..,a,-a,..,-a) (n/2 each) and H drawn exactly as in
// sample_gue for the same (seed, batch). n must be even.
SpectralSample sample_source(int n, double a, std::uint64_t seed, std::uint64_t batch = 0);

// Positions at time t of n Brownian bridges on [0, 1], n/2 starting at each
// of +-a and all ending at 0, with the variance scaling of the multiple
// Hermite weights exp(n(-x^2/(2t(1-t)) + a_j x/t)). Obtained from
// sample_source with alpha = a sqrt((1-t)/t) via x = sqrt(t(1-t)) y.
SpectralSample sample_nibm_positions(int n, double t, double a, std::uint64_t seed,
                                     std::uint64_t batch = 0);

AffineMap nibm_map(double t, double a);

// Max over sample points of |ln w_MH(x) - ln w_src(x / scale)|, both weights
// taken at scale n; should be at rounding level.
double nibm_map_defect(int n, double t, double a);

SpectralSample sample(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t batch = 0);

// Samples with substreams first_batch .. first_batch + count - 1. Each sample
// depends only on its own substream, so the output does not depend on
// `workers`.
std::vector<SpectralSample> sample_batch(const EnsembleSpec& spec, int count, std::uint64_t seed,
                                         int workers = 1, std::uint64_t first_batch = 0);

struct Histogram {
  enum class Mode { density, counts };
  std::vector<double> edges;
  std::vector<double> counts;
  Mode mode = Mode::density;
  double total = 0.0;    // points inside the edges
  double outside = 0.0;  // points outside the edges

  int bins() const noexcept { return static_cast<int>(counts.size()); }
  // counts / (total * width) in density mode, counts otherwise.
  double value(int i) const;
};

// Pooled histogram of all eigenvalues; bins are [e_i, e_{i+1}), the last one
// closed.
Histogram empirical_density(std::span<const SpectralSample> samples, std::vector<double> edges,
                            Histogram::Mode mode = Histogram::Mode::density);

struct EdgeScaling {
  double center = 2.0;
  double exponent = 2.0 / 3.0;
  double c = 1.0;
};

struct EmpiricalCdf {
  std::vector<double> points;  // sorted c n^{exponent} (lambda_max - center)
  double ks_distance = 0.0;    // sup |F_emp - F_2|
  double ks_location = 0.0;

  // Fraction of points <= s.
  double operator()(double s) const;
};

// Needs at least 200 samples. F_2 is evaluated with `tw_nodes` Nystrom nodes
// and taken as 0 below s = -10.
EmpiricalCdf largest_eigenvalue_cdf(std::span<const SpectralSample> samples, const EdgeScaling& scaling = {},
                                    int tw_nodes = 40);

}  // namespace mop::sampling
