#include <benchmark/benchmark.h>

#include "contamix/estimator.hpp"
#include "contamix/mixture.hpp"

namespace {

using namespace contamix;

Points desk_sample(const Kernel& k, std::size_t n) {
  return sample_mixture(k, MixtureParams::scalar(0.25, 2.0), n, 42);
}

void BM_Precompute(benchmark::State& state) {
  const Kernel k = Kernel::gaussian();
  const auto n = static_cast<std::size_t>(state.range(0));
  const Points data = desk_sample(k, n);
  const Grid grid = build_grid(n, 10.0);
  const std::vector<double> inner = grid_inner_products(k, grid);
  for (auto _ : state) benchmark::DoNotOptimize(precompute(k, grid, data, inner));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * grid.mu_count()));
}
BENCHMARK(BM_Precompute)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_ArgminScan(benchmark::State& state) {
  const Kernel k = Kernel::gaussian();
  const Points data = desk_sample(k, 5000);
  const Grid grid = build_grid(5000, 10.0);
  const ContrastTable table = precompute(k, grid, data);
  for (auto _ : state) benchmark::DoNotOptimize(argmin_contrast(grid, table));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ArgminScan)->Unit(benchmark::kMicrosecond);

void BM_Estimate(benchmark::State& state) {
  const Kernel k = Kernel::make(static_cast<Family>(state.range(0)), 10.0);
  const Points data = desk_sample(k, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(k, data, 10.0));
  state.SetLabel(k.descriptor());
}
BENCHMARK(BM_Estimate)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_ContrastNaive(benchmark::State& state) {
  const Kernel k = Kernel::gaussian();
  const Points data = desk_sample(k, 5000);
  const MixtureParams theta = MixtureParams::scalar(0.3, 1.9);
  for (auto _ : state) benchmark::DoNotOptimize(contrast_naive(k, theta, data));
}
BENCHMARK(BM_ContrastNaive)->Unit(benchmark::kMicrosecond);

}  // namespace
