#include <benchmark/benchmark.h>

#include "hso/norms.hpp"
#include "hso/operators.hpp"
#include "hso/sparse_family.hpp"
#include "hso/weights.hpp"

namespace {

using namespace hso;

void BM_ApplyMaximal(benchmark::State& state) {
  int levels = static_cast<int>(state.range(0));
  auto grid = make_dyadic_polar_grid(levels, 8, 1 << levels);
  auto f = sample_function(grid, random_test_function(1));
  for (auto _ : state) {
    auto out = apply_maximal(f, DyadicSystem::Standard, 1.25, levels - 1);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid->size()));
}
BENCHMARK(BM_ApplyMaximal)->Arg(6)->Arg(8)->Arg(10);

void BM_ApplySparseCarleson(benchmark::State& state) {
  int depth = static_cast<int>(state.range(0));
  auto grid = make_dyadic_polar_grid(depth + 1, 8, 1 << (depth + 1));
  auto fam = family_carleson(depth, DyadicSystem::Standard, BoxMeasure::Exact);
  auto f = sample_function(grid, random_test_function(2));
  for (auto _ : state) {
    auto out = apply_sparse(fam, 1.25, f);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid->size()));
}
BENCHMARK(BM_ApplySparseCarleson)->Arg(5)->Arg(7)->Arg(9);

void BM_BergmanPositive(benchmark::State& state) {
  int n_r = static_cast<int>(state.range(0));
  auto grid = make_polar_grid(n_r, 128, 0.95);
  auto f = sample_function(grid, random_test_function(3));
  for (auto _ : state) {
    auto out = apply_bergman_positive(1.25, f);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid->size()));
}
BENCHMARK(BM_BergmanPositive)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LayerCornerNorms(benchmark::State& state) {
  int depth = static_cast<int>(state.range(0));
  auto fam = family_carleson(depth, DyadicSystem::Standard, BoxMeasure::Exact);
  for (auto _ : state) {
    double acc = 0.0;
    for (int j = 2; j <= depth; ++j)
      acc += op_norm_corner_layer(fam, j, 1.25, NormCorner::LinfToL1);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_LayerCornerNorms)->Arg(8)->Arg(12);

void BM_WeakNorm(benchmark::State& state) {
  auto grid = make_polar_grid(static_cast<int>(state.range(0)), 64, 0.99);
  auto f = sample_function(grid, random_test_function(4));
  for (auto _ : state) {
    double v = weak_norm(f, 2.0);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_WeakNorm)->Arg(256)->Arg(1024);

void BM_LayerDecomposition(benchmark::State& state) {
  int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto fam = family_counterexample(m);
    benchmark::DoNotOptimize(fam.cubes.data());
  }
}
BENCHMARK(BM_LayerDecomposition)->Arg(10)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
