#include <benchmark/benchmark.h>

#include "hybell/binning.hpp"
#include "hybell/channels.hpp"
#include "hybell/sweep.hpp"

namespace {

using namespace hybell;

void BM_AdjointParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LossChannel ch(0.6, n);
  const FockOperator q = binned_quadrature_operator(BinningSet::halfline(0.0), n);
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_on_observable(ch, q));
}

void BM_AdjointSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LossChannel ch(0.6, n);
  const FockOperator q = binned_quadrature_operator(BinningSet::halfline(0.0), n);
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_on_observable_serial(ch, q));
}

void cat_maximum(benchmark::State& state, bool serial) {
  OptimizerConfig opt;
  opt.serial_grid = serial;
  for (auto _ : state)
    benchmark::DoNotOptimize(maximize_violation(Scenario::AtomPhoton, StateFamily::Cat, 1.0, 1.0, opt));
}

void BM_CatGridParallel(benchmark::State& state) { cat_maximum(state, false); }
void BM_CatGridSerial(benchmark::State& state) { cat_maximum(state, true); }

}  // namespace

BENCHMARK(BM_AdjointParallel)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdjointSerial)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CatGridParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CatGridSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
