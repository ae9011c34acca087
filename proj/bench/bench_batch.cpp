// Monte-Carlo cell throughput: OpenMP runner against the serial reference.

#include <benchmark/benchmark.h>

#include "pevgame/experiment.hpp"

using namespace pevgame;

namespace {

ExperimentSpec bench_spec(int runs) {
  ExperimentSpec spec;
  spec.runs = runs;
  spec.seed = 1;
  return spec;
}

void BM_CellSerial(benchmark::State& state) {
  const ExperimentSpec spec = bench_spec(static_cast<int>(state.range(1)));
  const auto groups = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_cell_serial(spec, groups, 99, false));
  state.SetItemsProcessed(state.iterations() * spec.runs);
}

void BM_CellParallel(benchmark::State& state) {
  const ExperimentSpec spec = bench_spec(static_cast<int>(state.range(1)));
  const auto groups = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(spec, groups, 99, false));
  state.SetItemsProcessed(state.iterations() * spec.runs);
}

void BM_CompareCellParallel(benchmark::State& state) {
  const ExperimentSpec spec = bench_spec(static_cast<int>(state.range(1)));
  const auto groups = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(spec, groups, 99, true));
  state.SetItemsProcessed(state.iterations() * spec.runs);
}

}  // namespace

BENCHMARK(BM_CellSerial)->Args({5, 64})->Args({25, 64})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CellParallel)->Args({5, 64})->Args({25, 64})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CompareCellParallel)->Args({10, 32})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
