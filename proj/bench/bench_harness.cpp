#include <benchmark/benchmark.h>

#include "anytime/harness.hpp"

namespace {

using anytime::Execution;

anytime::ExperimentConfig coverage_config(int threads) {
  anytime::ExperimentConfig c;
  c.horizon = 4096;
  c.replications = 256;
  c.depth = 4;
  c.seed = 1;
  c.threads = threads;
  return c;
}

void BM_CoverageSerial(benchmark::State& state) {
  const auto config = coverage_config(1);
  for (auto _ : state) benchmark::DoNotOptimize(anytime::run_coverage(config, Execution::Serial));
}

void BM_CoverageParallel(benchmark::State& state) {
  const auto config = coverage_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(anytime::run_coverage(config, Execution::Parallel));
}

void BM_InequalitySerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(anytime::run_inequality_suite(2000, 1, {}, Execution::Serial));
  }
}

void BM_InequalityParallel(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(anytime::run_inequality_suite(2000, 1, {}, Execution::Parallel, threads));
  }
}

void BM_TestingGame(benchmark::State& state) {
  anytime::ExperimentConfig c;
  c.kind = anytime::ExperimentKind::TestingGame;
  c.depth = 12;
  c.replications = 10000;
  const auto exec = state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
  for (auto _ : state) benchmark::DoNotOptimize(anytime::run_testing_game(c, exec));
}

}  // namespace

BENCHMARK(BM_CoverageSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InequalitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InequalityParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TestingGame)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
