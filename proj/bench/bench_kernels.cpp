// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "surplusect/concurrent_normals.hpp"
#include "surplusect/crofton_statistics.hpp"
#include "surplusect/parallel.hpp"

using namespace surplusect;

namespace {

void BM_CliffordTrialsSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::int64_t samples = n == 2 ? 2000 : 50;
  for (auto _ : state) benchmark::DoNotOptimize(run_clifford_trials_serial(n, samples, 1));
  state.SetItemsProcessed(state.iterations() * samples);
}

void BM_CliffordTrialsParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::int64_t samples = n == 2 ? 2000 : 50;
  set_thread_count(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_clifford_trials(n, samples, 1));
  state.SetItemsProcessed(state.iterations() * samples);
  set_thread_count(0);
}

void BM_CausticGridSerial(benchmark::State& state) {
  const SupportFunction h = SupportFunction::parse("ellipse:2,1");
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(caustic_grid_serial(h, BBox{-2, -1, 2, 1}, res));
  state.SetItemsProcessed(state.iterations() * res * res);
}

void BM_CausticGridParallel(benchmark::State& state) {
  const SupportFunction h = SupportFunction::parse("ellipse:2,1");
  const int res = static_cast<int>(state.range(0));
  set_thread_count(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(caustic_grid(h, BBox{-2, -1, 2, 1}, res));
  state.SetItemsProcessed(state.iterations() * res * res);
  set_thread_count(0);
}

}  // namespace

BENCHMARK(BM_CliffordTrialsSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CliffordTrialsParallel)
    ->ArgsProduct({{2, 3}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_CausticGridSerial)->Arg(51)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CausticGridParallel)->ArgsProduct({{51}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
