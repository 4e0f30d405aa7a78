#include <benchmark/benchmark.h>

#include <cmath>

#include "agebp/fpe.hpp"
#include "agebp/minsum.hpp"
#include "agebp/path_search.hpp"
#include "agebp/sim.hpp"

using namespace agebp;

namespace {

const OffspringLaw kHt = OffspringLaw::heavy_tail(0.5);

void BM_ClassicalOperator(benchmark::State& state) {
  const auto grid = TimeGrid::make(1.0 / static_cast<double>(state.range(0)), 1.0);
  const FixedPointOperator T(Classical{kHt, LifetimeLaw::grey(1.0, 1.0)}, grid, 1);
  std::vector<double> log_eta(grid.J + 1, -1.0);
  for (auto _ : state) benchmark::DoNotOptimize(T.apply_log(log_eta));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassicalOperator)->RangeMultiplier(2)->Range(250, 2000)->Complexity();

void BM_ContagionOperator(benchmark::State& state) {
  const auto grid = TimeGrid::make(1.0 / static_cast<double>(state.range(0)), 1.0);
  const FixedPointOperator T(ForwardContagious{kHt, LifetimeLaw::grey(1.0, 1.0), LifetimeLaw::exponential(1.0)},
                             grid, 1);
  std::vector<double> log_eta(grid.J + 1, -1.0);
  for (auto _ : state) benchmark::DoNotOptimize(T.apply_log(log_eta));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ContagionOperator)->RangeMultiplier(2)->Range(250, 1000)->Complexity();

void BM_SolveGrey(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(iterate_phi(Classical{kHt, LifetimeLaw::grey(1.0, 1.0)}, TimeGrid::make(1e-3, 1.0)));
}
BENCHMARK(BM_SolveGrey)->Unit(benchmark::kMillisecond);

void BM_OffspringSample(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(kHt.sample_real(rng));
}
BENCHMARK(BM_OffspringSample);

void BM_QuantileFarTail(benchmark::State& state) {
  double v = 1e-200;
  for (auto _ : state) benchmark::DoNotOptimize(kHt.quantile_tail(v));
}
BENCHMARK(BM_QuantileFarTail);

void BM_SimulateTrial(benchmark::State& state) {
  SimConfig c{ForwardIncubation{kHt, LifetimeLaw::exponential(1.0), LifetimeLaw::uniform(0.0, 0.2)}};
  c.cap = state.range(0);
  const Simulator sim(c);
  uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(t++));
}
BENCHMARK(BM_SimulateTrial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MinSumClassify(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(classify_minsum(kHt, LifetimeLaw::double_exp(1.0, 0.5)));
}
BENCHMARK(BM_MinSumClassify)->Unit(benchmark::kMillisecond);

void BM_PathSearch(benchmark::State& state) {
  const ForwardIncubation spec{kHt, LifetimeLaw::exponential(1.0), LifetimeLaw::uniform(0.0, 0.2)};
  uint64_t i = 0;
  for (auto _ : state) {
    Rng rng(derive_seed(1, i++));
    benchmark::DoNotOptimize(exploding_path_search(spec, 0.2, 1e6, 25, rng));
  }
}
BENCHMARK(BM_PathSearch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
