#include <benchmark/benchmark.h>

#include "freeconv/inversion.hpp"
#include "freeconv/sphere.hpp"
#include "freeconv/transforms.hpp"

using namespace freeconv;

namespace {

std::unique_ptr<ConvolutionTransform> weighted_bernoulli(int n) {
  return ConvolutionTransform::weighted(Measure::bernoulli(), sample(n, 1));
}

void BM_RecoverParallel(benchmark::State& state) {
  const auto g = weighted_bernoulli(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recover(*g, -3.0, 3.0, 4001, 1e-3));
}

void BM_RecoverSerial(benchmark::State& state) {
  const auto g = weighted_bernoulli(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recover_serial(*g, -3.0, 3.0, 4001, 1e-3));
}

void BM_ConcentrationParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(concentration_report(static_cast<int>(state.range(0)), 50000, 3));
}

void BM_ConcentrationSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(concentration_report_serial(static_cast<int>(state.range(0)), 50000, 3));
}

}  // namespace

BENCHMARK(BM_RecoverParallel)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecoverSerial)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConcentrationParallel)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConcentrationSerial)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
