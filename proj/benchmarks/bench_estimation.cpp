#include <benchmark/benchmark.h>

#include "g0/estimation.hpp"
#include "g0/kstest.hpp"
#include "g0/model.hpp"
#include "g0/rng.hpp"

namespace {

void BM_FitMl(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  g0::Philox gen(123, 0);
  const g0::Sample s = g0::sample(g0::G0Params{-3.0, 2.0, 1.0}, n, gen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(g0::fit_ml(s, 1.0));
  }
}
BENCHMARK(BM_FitMl)->Arg(49)->Arg(121)->Arg(1000);

void BM_KsTwoSample(benchmark::State& state) {
  g0::Philox gen(5, 0);
  const g0::Sample a = g0::sample(g0::G0Params{-3.0, 2.0, 1.0}, 121, gen);
  const g0::Sample b = g0::sample(g0::G0Params{-1.5, 0.5, 1.0}, 121, gen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(g0::ks_two_sample(a, b));
  }
}
BENCHMARK(BM_KsTwoSample);

}  // namespace
