#include <benchmark/benchmark.h>

#include "mop/equilibrium.hpp"
#include "mop/hermitian_eigen.hpp"
#include "mop/limit_kernels.hpp"
#include "mop/mop_kernel.hpp"
#include "mop/sampling.hpp"
#include "mop/special_functions.hpp"

namespace {

const mop::Polynomial gaussian({0.0, 0.0, 0.5});

void BM_Airy(benchmark::State& state) {
  double x = -20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mop::numerics::airy_ai(x));
    x = x > 20.0 ? -20.0 : x + 0.013;
  }
}
BENCHMARK(BM_Airy);

void BM_SampleGue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t batch = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mop::sampling::sample_gue(n, 1, batch++));
}
BENCHMARK(BM_SampleGue)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_TracyWidom(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mop::limits::tracy_widom_cdf(-2.0, m));
}
BENCHMARK(BM_TracyWidom)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_PearceyKernel(benchmark::State& state) {
  const mop::limits::PearceyParams p;
  for (auto _ : state) benchmark::DoNotOptimize(mop::limits::pearcey_kernel_int(0.7, -1.2, p));
}
BENCHMARK(BM_PearceyKernel)->Unit(benchmark::kMillisecond);

void BM_BuildKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto fam = mop::weights::WeightFamily::external_source(n, gaussian, {1.0, -1.0});
  const mop::kernel::MultiIndex nu{fam.default_multi_index(n)};
  const auto rule = mop::kernel::working_rule(fam, nu);
  for (auto _ : state) benchmark::DoNotOptimize(mop::kernel::build_kernel(fam, nu, rule));
}
BENCHMARK(BM_BuildKernel)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_KernelEval(benchmark::State& state) {
  const auto fam = mop::weights::WeightFamily::two_matrix_induced(12, gaussian, 1.0);
  const mop::kernel::MultiIndex nu{fam.default_multi_index(12)};
  const auto K = mop::kernel::build_kernel(fam, nu, mop::kernel::working_rule(fam, nu));
  for (auto _ : state) benchmark::DoNotOptimize(K(0.3, -0.4));
}
BENCHMARK(BM_KernelEval)->Unit(benchmark::kMicrosecond);

void BM_MinimizeSingle(benchmark::State& state) {
  const auto problem =
      mop::equilibrium::make_single_ep(gaussian, mop::equilibrium::GridSpec::uniform(static_cast<int>(state.range(0)), 2.5));
  mop::equilibrium::SolverOptions opts;
  opts.record_history = false;
  for (auto _ : state) benchmark::DoNotOptimize(mop::equilibrium::minimize(problem, opts));
}
BENCHMARK(BM_MinimizeSingle)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
