#include <benchmark/benchmark.h>

#include "fvlab/moran.hpp"
#include "fvlab/rng.hpp"

namespace {

void BM_MoranEvents(benchmark::State& state) {
  const int population = static_cast<int>(state.range(0));
  const fvlab::ModelParams params(
      1.0, 1.0, population,
      fvlab::MutationKernel::parent_independent(1.0, fvlab::ProbVector({0.5, 0.5})));
  const fvlab::EnvironmentPath env({0.0}, {fvlab::FitnessVector({0.9, 0.1})}, 1e9);
  const double nd = population;
  const double rate = nd * (nd - 1.0) / 2.0 + nd + (nd - 1.0);
  const double horizon = 20000.0 / rate;  // about 20k events per iteration
  const std::vector<double> times{horizon};
  std::vector<int> init(static_cast<std::size_t>(population));
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = static_cast<int>(i % 2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto rng = fvlab::make_rng(seed++, fvlab::Stream::kMoranEvents);
    benchmark::DoNotOptimize(
        fvlab::simulate_moran(params, env, fvlab::ParticleState(init), horizon, times, rng));
  }
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_MoranEvents)->Arg(50)->Arg(200)->Arg(1000);

}  // namespace
