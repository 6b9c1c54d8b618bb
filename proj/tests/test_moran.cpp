#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fvlab/moran.hpp"
#include "fvlab/rng.hpp"
#include "oracles.hpp"

using namespace fvlab;

namespace {

ModelParams neutral_params(int population, double gamma = 1.0) {
  return ModelParams(gamma, 0.0, population,
                     MutationKernel::parent_independent(1.0, ProbVector({0.5, 0.5})));
}

EnvironmentPath constant_env(std::vector<double> w, double horizon) {
  return EnvironmentPath({0.0}, {FitnessVector(std::move(w))}, horizon);
}

// 99.9% chi-square quantile via the Wilson-Hilferty approximation.
double chi2_q999(int df) {
  const double z = 3.0902;
  const double d = static_cast<double>(df);
  const double c = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
  return d * c * c * c;
}

}  // namespace

TEST_CASE("one-way mutation drives fixation of the favored allele") {
  // alpha = 0, beta'' = 0, q' a point mass at allele 0: allele 0 is absorbing
  const ModelParams params(1.0, 0.0, 10,
                           MutationKernel::parent_independent(1.0, ProbVector({1.0, 0.0})));
  const EnvironmentPath env = constant_env({0.5, 0.5}, 60.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto rng = make_rng(seed, Stream::kMoranEvents);
    const std::vector<double> times{30.0, 45.0, 60.0};
    const MoranTrajectory traj = simulate_moran(
        params, env, ParticleState(std::vector<int>(10, 1)), 60.0, times, rng);
    for (const auto& m : traj.measures) {
      CHECK(m.count(0) == 10);
    }
  }
}

TEST_CASE("with two individuals the first resampling event fixes the pair") {
  // beta must stay positive; make mutation negligible on the horizon
  const ModelParams params(1.0, 0.0, 2,
                           MutationKernel::parent_independent(1e-12, ProbVector({0.5, 0.5})));
  const EnvironmentPath env = constant_env({0.5, 0.5}, 50.0);
  int fixed = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = make_rng(seed, Stream::kMoranEvents);
    const std::vector<double> times{30.0, 50.0};
    const MoranTrajectory traj =
        simulate_moran(params, env, ParticleState({0, 1}), 50.0, times, rng);
    const bool fixed_then = traj.measures[0].count(0) == 2 || traj.measures[0].count(1) == 2;
    const bool fixed_later = traj.measures[1] == traj.measures[0];
    if (fixed_then && fixed_later) ++fixed;
  }
  CHECK(fixed == 20);
}

TEST_CASE("neutral symmetric mutation pulls the mean frequency to one half") {
  const ModelParams params = neutral_params(50);
  const DualFunction f = DualFunction::indicator(2, 0);
  const Estimate est =
      estimate_moran_moment(params, FitnessVector({0.3, 0.3}), ProbVector({0.9, 0.1}), f, 20.0,
                            2000, 424242, /*quenched=*/false, /*threads=*/0);
  CHECK(std::abs(est.mean - 0.5) <= 3.0 * est.standard_error());
}

TEST_CASE("population size is conserved at every sample time") {
  const ModelParams params(1.0, 1.0, 30,
                           MutationKernel(0.7, 0.6, ProbVector({0.2, 0.3, 0.5}),
                                          {{0.5, 0.25, 0.25}, {0.1, 0.8, 0.1}, {0.3, 0.3, 0.4}}));
  const EnvironmentPath env = constant_env({0.9, 0.5, 0.1}, 8.0);
  std::vector<double> times;
  for (int i = 0; i <= 80; ++i) times.push_back(0.1 * i);
  auto rng = make_rng(7, Stream::kMoranEvents);
  const MoranTrajectory traj = simulate_moran(
      params, env, ParticleState(std::vector<int>(30, 0)), 8.0, times, rng);
  REQUIRE(traj.measures.size() == times.size());
  for (const auto& m : traj.measures) CHECK(m.total() == 30);
}

TEST_CASE("with alpha = 0 the trajectory ignores the environment path") {
  const ModelParams params = neutral_params(20);
  const EnvironmentPath env_a = constant_env({0.1, 0.9}, 10.0);
  auto rng_b = make_rng(99, Stream::kEnvironment);
  const EnvironmentPath env_b =
      sample_path(MarkovJumpEnvironment({FitnessVector({0.8, 0.2}), FitnessVector({0.3, 0.7})},
                                        {{-2.0, 2.0}, {2.0, -2.0}}, ProbVector({0.5, 0.5})),
                  10.0, rng_b);
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(0.5 * i);
  std::vector<int> init(20);
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = static_cast<int>(i % 2);

  auto rng1 = make_rng(1234, Stream::kMoranEvents);
  auto rng2 = make_rng(1234, Stream::kMoranEvents);
  const MoranTrajectory ta = simulate_moran(params, env_a, ParticleState(init), 10.0, times, rng1);
  const MoranTrajectory tb = simulate_moran(params, env_b, ParticleState(init), 10.0, times, rng2);
  REQUIRE(ta.measures.size() == tb.measures.size());
  for (std::size_t i = 0; i < ta.measures.size(); ++i) CHECK(ta.measures[i] == tb.measures[i]);
}

TEST_CASE("zero fitness makes every candidate selection a no-op") {
  const MutationKernel kernel = MutationKernel::parent_independent(1.0, ProbVector({0.5, 0.5}));
  const ModelParams no_selection(1.0, 0.0, 20, kernel);
  const ModelParams null_selection(1.0, 4.0, 20, kernel);
  const EnvironmentPath env = constant_env({0.0, 0.0}, 10.0);
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(0.5 * i);
  std::vector<int> init(20);
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = static_cast<int>(i % 2);

  auto rng1 = make_rng(77, Stream::kMoranEvents);
  auto rng2 = make_rng(77, Stream::kMoranEvents);
  const MoranTrajectory ta =
      simulate_moran(no_selection, env, ParticleState(init), 10.0, times, rng1);
  const MoranTrajectory tb =
      simulate_moran(null_selection, env, ParticleState(init), 10.0, times, rng2);
  for (std::size_t i = 0; i < ta.measures.size(); ++i) CHECK(ta.measures[i] == tb.measures[i]);
}

TEST_CASE("permuting the initial individuals leaves the count law unchanged") {
  const ModelParams params(1.0, 1.0, 12,
                           MutationKernel::parent_independent(0.5, ProbVector({0.5, 0.5})));
  const EnvironmentPath env = constant_env({0.8, 0.3}, 1.0);
  std::vector<int> init_a, init_b;
  for (int i = 0; i < 12; ++i) {
    init_a.push_back(i < 6 ? 0 : 1);
    init_b.push_back(i % 2);
  }
  const int replicates = 4000;
  const std::vector<double> times{1.0};
  std::vector<int> hist_a(13, 0), hist_b(13, 0);
  for (int rep = 0; rep < replicates; ++rep) {
    auto rng_a = make_rng(5000, Stream::kMoranEvents, static_cast<std::uint64_t>(rep));
    auto rng_b = make_rng(6000, Stream::kMoranEvents, static_cast<std::uint64_t>(rep));
    hist_a[static_cast<std::size_t>(
        simulate_moran(params, env, ParticleState(init_a), 1.0, times, rng_a)
            .measures[0]
            .count(0))]++;
    hist_b[static_cast<std::size_t>(
        simulate_moran(params, env, ParticleState(init_b), 1.0, times, rng_b)
            .measures[0]
            .count(0))]++;
  }
  // two-sample chi-square over pooled bins with expected count >= 8
  std::vector<std::pair<int, int>> bins;
  int acc_a = 0, acc_b = 0;
  for (int c = 0; c <= 12; ++c) {
    acc_a += hist_a[static_cast<std::size_t>(c)];
    acc_b += hist_b[static_cast<std::size_t>(c)];
    if (acc_a + acc_b >= 16) {
      bins.emplace_back(acc_a, acc_b);
      acc_a = acc_b = 0;
    }
  }
  if (acc_a + acc_b > 0) {
    bins.back().first += acc_a;
    bins.back().second += acc_b;
  }
  double stat = 0.0;
  for (const auto& [a, b] : bins) {
    const double expected_half = (a + b) / 2.0;
    stat += (a - expected_half) * (a - expected_half) / expected_half;
    stat += (b - expected_half) * (b - expected_half) / expected_half;
  }
  CHECK(stat < chi2_q999(static_cast<int>(bins.size()) - 1));
}

TEST_CASE("moment estimator on the worked instances") {
  const ModelParams params = neutral_params(10);
  const Estimate constant = estimate_moran_moment(
      params, FitnessVector({0.5, 0.5}), ProbVector({0.4, 0.6}), DualFunction::constant(2, 3.25),
      1.0, 50, 7, false, 0);
  CHECK(constant.mean == 3.25);
  CHECK(constant.variance == 0.0);

  // t = 0 with a deterministic initial state: exactly the initial moment
  std::vector<int> init(10);
  for (int i = 0; i < 4; ++i) init[static_cast<std::size_t>(i)] = 0;
  for (int i = 4; i < 10; ++i) init[static_cast<std::size_t>(i)] = 1;
  const DualFunction f = DualFunction::indicator(2, 0);
  const Estimate at_zero = estimate_moran_moment(params, FitnessVector({0.5, 0.5}), init, f, 0.0,
                                                 25, 7, true, 0);
  CHECK(at_zero.mean == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(at_zero.variance == 0.0);
}
