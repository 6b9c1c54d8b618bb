#include <benchmark/benchmark.h>

#include "fvlab/dual.hpp"
#include "fvlab/rng.hpp"

namespace {

void BM_DualUntilAbsorbed(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0));
  const fvlab::ModelParams params(
      1.0, alpha, 10,
      fvlab::MutationKernel::parent_independent(1.0, fvlab::ProbVector({0.5, 0.5})));
  const fvlab::MarkovJumpEnvironment chain(
      {fvlab::FitnessVector({0.9, 0.1}), fvlab::FitnessVector({0.2, 0.8})},
      {{-1.0, 1.0}, {1.0, -1.0}}, fvlab::ProbVector({0.5, 0.5}));
  const fvlab::DualFunction f = fvlab::DualFunction::indicator(2, 0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto env_rng = fvlab::make_rng(seed, fvlab::Stream::kEnvironment);
    auto ev_rng = fvlab::make_rng(seed++, fvlab::Stream::kDualEvents);
    benchmark::DoNotOptimize(
        fvlab::simulate_dual_until_absorbed(params, chain, f, env_rng, ev_rng));
  }
}
BENCHMARK(BM_DualUntilAbsorbed)->Arg(0)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
