#include "mop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mop/error.hpp"
#include "mop/hermitian_eigen.hpp"
#include "mop/limit_kernels.hpp"
#include "mop/philox.hpp"
#include "mop/weights.hpp"

namespace mop::sampling {

namespace {

numerics::HermitianMatrix gue_matrix(int n, std::uint64_t seed, std::uint64_t batch) {
  PhiloxStream rng(seed, batch);
  const double sd_diag = 1.0 / std::sqrt(static_cast<double>(n));
  const double sd_off = 1.0 / std::sqrt(2.0 * n);
  const auto N = static_cast<std::size_t>(n);
  numerics::HermitianMatrix h(N);
  for (std::size_t j = 0; j < N; ++j) {
    h(j, j) = sd_diag * rng.normal();
    for (std::size_t k = j + 1; k < N; ++k) {
      const double re = sd_off * rng.normal();
      const double im = sd_off * rng.normal();
      h(j, k) = {re, im};
      h(k, j) = {re, -im};
    }
  }
  return h;
}

void check_n(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "matrix size n must be >= 1");
}

}  // namespace

std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::gue: return "gue";
    case Ensemble::source: return "source";
    case Ensemble::nibm: return "nibm";
  }
  return "unknown";
}

SpectralSample sample_gue(int n, std::uint64_t seed, std::uint64_t batch) {
  check_n(n);
  SpectralSample s;
  s.descriptor = {Ensemble::gue, n, 0.0, 0.5};
  s.seed = seed;
  s.batch = batch;
  s.eigenvalues = numerics::hermitian_eigenvalues(gue_matrix(n, seed, batch));
  return s;
}

SpectralSample sample_source(int n, double a, std::uint64_t seed, std::uint64_t batch) {
  check_n(n);
  if (n % 2 != 0) throw Error(ErrorCode::odd_n, "external-source model needs even n");
  if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::invalid_argument, "source strength a must be >= 0");
  auto h = gue_matrix(n, seed, batch);
  const auto N = static_cast<std::size_t>(n);
  for (std::size_t j = 0; j < N; ++j) h(j, j) += j < N / 2 ? a : -a;
  SpectralSample s;
  s.descriptor = {Ensemble::source, n, a, 0.5};
  s.seed = seed;
  s.batch = batch;
  s.eigenvalues = numerics::hermitian_eigenvalues(h);
  return s;
}

AffineMap nibm_map(double t, double a) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::time_out_of_range, "time t must lie in (0, 1)");
  return {std::sqrt(t * (1.0 - t)), a * std::sqrt((1.0 - t) / t)};
}

double nibm_map_defect(int n, double t, double a) {
  const AffineMap m = nibm_map(t, a);
  const auto mh = weights::WeightFamily::multiple_hermite(n, t, 1.0, {a, -a});
  const auto src = weights::WeightFamily::external_source(n, Polynomial({0.0, 0.0, 0.5}), {m.alpha, -m.alpha});
  double worst = 0.0;
  for (int i = -20; i <= 20; ++i) {
    const double x = 0.1 * i * (1.0 + a);
    for (int j = 0; j < 2; ++j) {
      const double l1 = mh.log_weight(j, x).log_abs;
      const double l2 = src.log_weight(j, x / m.scale).log_abs;
      worst = std::max(worst, std::abs(l1 - l2) / std::max(1.0, std::abs(l1)));
    }
  }
  return worst;
}

SpectralSample sample_nibm_positions(int n, double t, double a, std::uint64_t seed, std::uint64_t batch) {
  const AffineMap m = nibm_map(t, a);
  if (nibm_map_defect(n, t, a) > 1e-12)
    throw Error(ErrorCode::domain_error, "bridge/external-source weight map check failed");
  SpectralSample s = sample_source(n, m.alpha, seed, batch);
  for (double& x : s.eigenvalues) x *= m.scale;
  s.descriptor = {Ensemble::nibm, n, a, t};
  s.map = m;
  return s;
}

SpectralSample sample(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t batch) {
  switch (spec.kind) {
    case Ensemble::gue: return sample_gue(spec.n, seed, batch);
    case Ensemble::source: return sample_source(spec.n, spec.a, seed, batch);
    case Ensemble::nibm: return sample_nibm_positions(spec.n, spec.t, spec.a, seed, batch);
  }
  throw Error(ErrorCode::invalid_argument, "unknown ensemble");
}

std::vector<SpectralSample> sample_batch(const EnsembleSpec& spec, int count, std::uint64_t seed, int workers,
                                         std::uint64_t first_batch) {
  if (count < 0) throw Error(ErrorCode::invalid_argument, "sample count must be >= 0");
  // Validate once up front so workers never throw.
  if (count > 0) (void)sample(spec, seed, first_batch);
  std::vector<SpectralSample> out(static_cast<std::size_t>(count));
  workers = std::clamp(workers, 1, std::max(1, count));
  const auto run = [&](int w) {
    for (int i = w; i < count; i += workers)
      out[static_cast<std::size_t>(i)] = sample(spec, seed, first_batch + static_cast<std::uint64_t>(i));
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return out;
}

double Histogram::value(int i) const {
  const double c = counts[static_cast<std::size_t>(i)];
  if (mode == Mode::counts) return c;
  if (total <= 0.0) return 0.0;
  return c / (total * (edges[static_cast<std::size_t>(i) + 1] - edges[static_cast<std::size_t>(i)]));
}

Histogram empirical_density(std::span<const SpectralSample> samples, std::vector<double> edges,
                            Histogram::Mode mode) {
  if (samples.empty()) throw Error(ErrorCode::empty_input, "no samples to histogram");
  if (edges.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw Error(ErrorCode::non_sorted_input, "bin edges must increase");
  Histogram h;
  h.mode = mode;
  h.counts.assign(edges.size() - 1, 0.0);
  for (const auto& s : samples) {
    for (double x : s.eigenvalues) {
      if (x < edges.front() || x > edges.back()) {
        h.outside += 1.0;
        continue;
      }
      auto it = std::upper_bound(edges.begin(), edges.end(), x);
      std::size_t bin = static_cast<std::size_t>(it - edges.begin());
      bin = bin == 0 ? 0 : std::min(bin - 1, h.counts.size() - 1);
      h.counts[bin] += 1.0;
      h.total += 1.0;
    }
  }
  h.edges = std::move(edges);
  return h;
}

double EmpiricalCdf::operator()(double s) const {
  if (points.empty()) return 0.0;
  const auto it = std::upper_bound(points.begin(), points.end(), s);
  return static_cast<double>(it - points.begin()) / static_cast<double>(points.size());
}

EmpiricalCdf largest_eigenvalue_cdf(std::span<const SpectralSample> samples, const EdgeScaling& scaling,
                                    int tw_nodes) {
  if (samples.size() < 200)
    throw Error(ErrorCode::insufficient_samples, "largest-eigenvalue CDF needs at least 200 samples");
  EmpiricalCdf cdf;
  for (const auto& s : samples) {
    if (s.eigenvalues.empty()) throw Error(ErrorCode::empty_input, "sample without eigenvalues");
    const double lmax = s.eigenvalues.back();
    const double factor = scaling.c * std::pow(static_cast<double>(s.n()), scaling.exponent);
    cdf.points.push_back(factor * (lmax - scaling.center));
  }
  std::sort(cdf.points.begin(), cdf.points.end());
  const double S = static_cast<double>(cdf.points.size());
  for (std::size_t i = 0; i < cdf.points.size(); ++i) {
    const double s = cdf.points[i];
    const double F = s < -10.0 ? 0.0 : limits::tracy_widom_cdf(s, tw_nodes);
    const double lo = std::abs(F - static_cast<double>(i) / S);
    const double hi = std::abs(F - static_cast<double>(i + 1) / S);
    if (std::max(lo, hi) > cdf.ks_distance) {
      cdf.ks_distance = std::max(lo, hi);
      cdf.ks_location = s;
    }
  }
  return cdf;
}

}  // namespace mop::sampling
