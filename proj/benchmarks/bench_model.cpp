#include <benchmark/benchmark.h>

#include "g0/model.hpp"
#include "g0/rng.hpp"

namespace {

void BM_LogDensity(benchmark::State& state) {
  const g0::G0Density d(g0::G0Params{-3.0, 2.0, 8.0});
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.log_density(z));
    z = z < 100.0 ? z * 1.01 : 0.1;
  }
}
BENCHMARK(BM_LogDensity);

void BM_Cdf(benchmark::State& state) {
  const g0::G0Params p{-3.0, 2.0, 8.0};
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g0::cdf(p, z));
    z = z < 100.0 ? z * 1.07 : 0.1;
  }
}
BENCHMARK(BM_Cdf);

void BM_Quantile(benchmark::State& state) {
  const g0::G0Params p{-3.0, 2.0, 8.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(g0::quantile(p, 0.95));
  }
}
BENCHMARK(BM_Quantile);

void BM_SampleDraw(benchmark::State& state) {
  const g0::G0Params p{-3.0, 2.0, 8.0};
  g0::Philox gen(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(g0::sample_one(p, gen));
  }
}
BENCHMARK(BM_SampleDraw);

}  // namespace

BENCHMARK_MAIN();
