// Serial reference vs OpenMP for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "ckpt/checkpoint_cost.hpp"
#include "ckpt/simulator.hpp"
#include "ckpt/sweep.hpp"

namespace {

using namespace ckpt;

SimConfig paper_config(int n, int r) {
  SimConfig c;
  c.spec = {n, r};
  c.tc = 297.0;
  c.ts = 1.0;
  c.failure_model = ExponentialFailureModel::from_rate(0.0000348074);
  c.total_work = 9600;
  c.quantum_time = 1.0;
  return c;
}

template <auto Fn>
void BM_MonteCarlo(benchmark::State& state) {
  const auto c = paper_config(static_cast<int>(state.range(0)), 2);
  const auto trials = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(c, trials, 1, MonteCarloOptions{}));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_MonteCarlo<monte_carlo_overhead_serial>)->Name("monte_carlo/serial")->Args({16, 200'000})->Args({32, 200'000});
BENCHMARK(BM_MonteCarlo<monte_carlo_overhead>)->Name("monte_carlo/omp")->Args({16, 200'000})->Args({32, 200'000});

template <auto Fn>
void BM_EstimateTs(benchmark::State& state) {
  std::vector<double> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(100.0 + (i * 37) % 113);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(samples, n, 2, kDefaultTsIterations, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kDefaultTsIterations));
}
BENCHMARK(BM_EstimateTs<estimate_ts_serial>)->Name("estimate_ts/serial")->Arg(16)->Arg(32);
BENCHMARK(BM_EstimateTs<estimate_ts>)->Name("estimate_ts/omp")->Arg(16)->Arg(32);

template <auto Fn>
void BM_Sweep(benchmark::State& state) {
  const auto base = paper_config(16, static_cast<int>(state.range(0)));
  const auto grid = default_interval_grid();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(base, grid, 50, 1));
}
BENCHMARK(BM_Sweep<run_sweep_serial>)->Name("sweep/serial")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<run_sweep>)->Name("sweep/omp")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
