#include <benchmark/benchmark.h>

#include <random>

#include "fvlab/dual.hpp"

namespace {

fvlab::DualFunction random_tensor(int k, int n, std::mt19937_64& rng) {
  std::size_t size = 1;
  for (int d = 0; d < n; ++d) size *= static_cast<std::size_t>(k);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(size);
  for (double& x : v) x = unit(rng);
  return fvlab::DualFunction(k, n, std::move(v));
}

void BM_ApplyResampling(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto f = random_tensor(static_cast<int>(state.range(0)), 4, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fvlab::apply_resampling(f, 0, 3));
  }
}
BENCHMARK(BM_ApplyResampling)->Arg(2)->Arg(4)->Arg(8);

void BM_ApplySelection(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int k = static_cast<int>(state.range(0));
  const auto f = random_tensor(k, 4, rng);
  const fvlab::FitnessVector w(std::vector<double>(static_cast<std::size_t>(k), 0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fvlab::apply_selection(f, 1, w));
  }
}
BENCHMARK(BM_ApplySelection)->Arg(2)->Arg(4)->Arg(8);

void BM_Canonicalize(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto f = random_tensor(2, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.canonicalized());
  }
}
BENCHMARK(BM_Canonicalize)->Arg(2)->Arg(6)->Arg(10);

}  // namespace
