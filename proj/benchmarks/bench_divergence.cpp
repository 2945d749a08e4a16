#include <benchmark/benchmark.h>

#include "g0/divergence.hpp"

namespace {

// The source experiments report triangular distances around a millisecond and
// arithmetic-geometric around four; these track the same evaluations.
void BM_Distance(benchmark::State& state) {
  const auto kind = static_cast<g0::DistanceKind>(state.range(0));
  const g0::G0Params p{-1.5, 0.5, 1.0};
  const g0::G0Params q{-3.0, 2.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(g0::hphi_distance(kind, p, q));
  }
}
BENCHMARK(BM_Distance)
    ->Arg(static_cast<int>(g0::DistanceKind::KullbackLeibler))
    ->Arg(static_cast<int>(g0::DistanceKind::Triangular))
    ->Arg(static_cast<int>(g0::DistanceKind::Bhattacharyya))
    ->Arg(static_cast<int>(g0::DistanceKind::ArithmeticGeometric));

void BM_AnalyticKs(benchmark::State& state) {
  const g0::G0Params p{-1.5, 0.5, 1.0};
  const g0::G0Params q{-3.0, 2.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(g0::analytic_ks_distance(p, q));
  }
}
BENCHMARK(BM_AnalyticKs);

}  // namespace
