// Serial reference path against the OpenMP path for the three parallel loops.

#include "msgc/gc.hpp"
#include "msgc/monte_carlo.hpp"
#include "msgc/surrogate.hpp"
#include "msgc/var_model.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace msgc;

namespace {

Execution execution(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

std::vector<int> scales(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  return v;
}

void BM_ExactSweep(benchmark::State& state) {
  const SimulationConfig cfg = benchmark_config(Generator::mix);
  const VarModel model = build_benchmark(cfg);
  const MatrixXd h = observation_matrix(cfg);
  MultiscaleOptions opts;
  opts.execution = execution(state);
  for (auto _ : state) benchmark::DoNotOptimize(multiscale_gc_exact(model, 6, scales(15), opts, h));
}

void BM_Surrogates(benchmark::State& state) {
  SimulationConfig cfg = benchmark_config(Generator::uni);
  cfg.samples = 700;
  const TimeSeriesSet data = simulate_benchmark(cfg);
  SurrogateConfig sc;
  sc.n_surrogates = 20;
  MultiscaleOptions opts;
  opts.execution = execution(state);
  for (auto _ : state) benchmark::DoNotOptimize(significance_bands(data, 6, scales(10), 10, sc, opts));
}

void BM_MonteCarlo(benchmark::State& state) {
  MonteCarloConfig mc;
  mc.simulation = benchmark_config(Generator::uni);
  mc.realizations = 20;
  mc.scales = scales(10);
  MultiscaleOptions opts;
  opts.execution = execution(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(mc, opts));
}

}  // namespace

// Argument 0 runs serially, 1 in parallel.
BENCHMARK(BM_ExactSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Surrogates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
