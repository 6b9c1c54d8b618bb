#include <benchmark/benchmark.h>

#include <random>

#include "fvlab/types.hpp"

namespace {

void BM_ProductMoment(benchmark::State& state) {
  const int k = 4;
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::size_t size = 1;
  for (int d = 0; d < n; ++d) size *= static_cast<std::size_t>(k);
  std::vector<double> v(size);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (double& x : v) x = unit(rng);
  const fvlab::DualFunction f(k, n, std::move(v));
  const fvlab::ProbVector m({0.1, 0.2, 0.3, 0.4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(fvlab::product_moment(m, f));
  }
}
BENCHMARK(BM_ProductMoment)->DenseRange(1, 6);

void BM_WithoutReplacement(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::size_t size = 1;
  for (int d = 0; d < n; ++d) size *= 4;
  std::vector<double> v(size);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (double& x : v) x = unit(rng);
  const fvlab::DualFunction f(4, n, std::move(v));
  // cost is independent of the population size
  const fvlab::EmpiricalMeasure m({250000, 250000, 250000, 250000});
  for (auto _ : state) {
    benchmark::DoNotOptimize(fvlab::moment_without_replacement(m, f));
  }
}
BENCHMARK(BM_WithoutReplacement)->DenseRange(1, 6);

}  // namespace
