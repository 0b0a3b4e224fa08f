#include <benchmark/benchmark.h>

#include "contamix/kernels.hpp"

namespace {

using contamix::Kernel;

void BM_CrossInnerClosedForm(benchmark::State& state) {
  const Kernel k = Kernel::gaussian();
  double mu = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(contamix::cross_inner(k, mu));
    mu += 1e-6;
  }
}
BENCHMARK(BM_CrossInnerClosedForm);

// One skew-Gaussian inner product runs 2^14 Simpson panels.
void BM_CrossInnerSkewQuadrature(benchmark::State& state) {
  const Kernel k = Kernel::skew_gaussian(10.0);
  double mu = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(contamix::cross_inner(k, mu));
    mu += 1e-6;
  }
}
BENCHMARK(BM_CrossInnerSkewQuadrature)->Unit(benchmark::kMicrosecond);

void BM_McInner(benchmark::State& state) {
  const Kernel k = Kernel::skew_gaussian(10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(contamix::mc_inner(k, 1.0, static_cast<std::uint64_t>(state.range(0)), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McInner)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);

void BM_Sample(benchmark::State& state) {
  const Kernel k = Kernel::make(static_cast<contamix::Family>(state.range(0)), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(contamix::sample(k, 5000, 3));
  state.SetLabel(k.descriptor());
}
BENCHMARK(BM_Sample)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

}  // namespace
