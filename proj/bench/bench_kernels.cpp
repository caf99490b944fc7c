// Serial reference vs parallel kernels: the regime sweep and the SPE grid
// optimum. Run with --benchmark_counters_tabular=true for a compact table.
#include <benchmark/benchmark.h>

#include "secgame/analysis.hpp"
#include "secgame/model.hpp"
#include "secgame/oracle.hpp"

using namespace secgame;

namespace {

model::FacilityProfile three_facility() { return model::FacilityProfile({"e1", "e2", "e3"}, 17.0, {20.0, 19.0, 18.0}); }

// Five vulnerable facilities at c_a = 0.5.
model::FacilityProfile five_facility() {
  return model::FacilityProfile({"e1", "e2", "e3", "e4", "e5"}, 10.0, {16.0, 14.5, 13.0, 12.0, 11.0});
}

void sweep_args(benchmark::internal::Benchmark* b) {
  for (int n : {100, 200, 400}) b->Arg(n);
}

void BM_sweep_serial(benchmark::State& state) {
  const auto p = three_facility();
  const analysis::AxisRange axis{0.0, 4.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(analysis::regime_sweep_serial(p, axis, axis));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_sweep_parallel(benchmark::State& state) {
  const auto p = three_facility();
  const analysis::AxisRange axis{0.0, 4.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(analysis::regime_sweep(p, axis, axis));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

// Argument is 1/h.
void grid_args(benchmark::internal::Benchmark* b) {
  for (int inv : {100, 300, 1000}) b->Arg(inv);
}

void BM_grid_serial(benchmark::State& state) {
  const auto p = five_facility();
  const model::CostParams params(0.5, 2.0);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::spe_grid_optimum_serial(p, params, h));
}

void BM_grid_parallel(benchmark::State& state) {
  const auto p = five_facility();
  const model::CostParams params(0.5, 2.0);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::spe_grid_optimum(p, params, h));
}

}  // namespace

BENCHMARK(BM_sweep_serial)->Apply(sweep_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sweep_parallel)->Apply(sweep_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_grid_serial)->Apply(grid_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_grid_parallel)->Apply(grid_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
