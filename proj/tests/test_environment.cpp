#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fvlab/environment.hpp"
#include "fvlab/estimate.hpp"
#include "fvlab/rng.hpp"

using namespace fvlab;

namespace {

MarkovJumpEnvironment two_state_symmetric(double rate) {
  return MarkovJumpEnvironment({FitnessVector({0.2, 0.8}), FitnessVector({0.9, 0.1})},
                               {{-rate, rate}, {rate, -rate}}, ProbVector({0.5, 0.5}));
}

}  // namespace

TEST_CASE("path evaluation: right continuity and left limits") {
  const FitnessVector a({0.1, 0.9});
  const FitnessVector b({0.7, 0.3});
  const EnvironmentPath path({0.0, 1.0}, {a, b}, 2.0);

  CHECK(path.at(0.0) == a);
  CHECK(path.at(0.5) == a);
  CHECK(path.at(1.0) == b);  // new segment at the jump time
  CHECK(path.at(2.0) == b);
  CHECK(path.left_limit(1.0) == a);  // old segment at the jump time
  CHECK(path.left_limit(0.5) == path.at(0.5));
  CHECK(path.left_limit(1.5) == b);

  CHECK_THROWS_AS(path.at(2.5), std::invalid_argument);
  CHECK_THROWS_AS(path.left_limit(0.0), std::invalid_argument);
  CHECK_THROWS_AS(EnvironmentPath({0.5}, {a}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(EnvironmentPath({0.0, 1.0, 1.0}, {a, b, a}, 2.0), std::invalid_argument);
}

TEST_CASE("constant path is constant and a frozen chain stays put") {
  std::mt19937_64 rng(5);
  const FitnessVector w({0.4, 0.6});
  const EnvironmentPath constant = sample_path(w, 5.0, rng);
  CHECK(constant.jump_times.size() == 1);
  CHECK(constant.at(0.0) == w);
  CHECK(constant.at(4.9) == w);
  CHECK(constant.left_limit(3.0) == w);

  const MarkovJumpEnvironment frozen({FitnessVector({0.0, 1.0}), FitnessVector({1.0, 0.0})},
                                     {{0.0, 0.0}, {0.0, 0.0}}, ProbVector({1.0, 0.0}));
  const EnvironmentPath still = sample_path(frozen, 10.0, rng);
  CHECK(still.jump_times.size() == 1);
  CHECK(still.at(7.0) == frozen.states[0]);
}

TEST_CASE("two-state chain jump count matches the Poisson oracle") {
  // holding rate 1 in both states: jumps on [0,100] are Poisson(100)
  const MarkovJumpEnvironment chain = two_state_symmetric(1.0);
  const int replicates = 1000;
  std::vector<double> counts(replicates);
  for (int rep = 0; rep < replicates; ++rep) {
    auto rng = make_rng(99, Stream::kEnvironment, static_cast<std::uint64_t>(rep));
    counts[static_cast<std::size_t>(rep)] =
        static_cast<double>(sample_path(chain, 100.0, rng).jump_times.size() - 1);
  }
  const Estimate est = summarize(counts);
  CHECK(std::abs(est.mean - 100.0) <= 3.0 * est.standard_error());
}

TEST_CASE("sampled paths: evaluate equals left limit away from jumps") {
  auto rng = make_rng(42, Stream::kEnvironment);
  const EnvironmentPath path = sample_path(two_state_symmetric(2.0), 20.0, rng);
  std::mt19937_64 probe(3);
  std::uniform_real_distribution<double> unif(1e-9, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double t = unif(probe);
    bool is_jump = false;
    for (double s : path.jump_times) {
      if (s == t) is_jump = true;
    }
    if (!is_jump) CHECK(path.at(t) == path.left_limit(t));
  }
}

TEST_CASE("stationary distribution of small chains") {
  CHECK(stationary_distribution(two_state_symmetric(1.5))[0] == doctest::Approx(0.5));

  const MarkovJumpEnvironment single({FitnessVector({0.3, 0.3})}, {{0.0}}, ProbVector({1.0}));
  CHECK(stationary_distribution(single)[0] == 1.0);

  const MarkovJumpEnvironment reducible(
      {FitnessVector({0.0, 0.0}), FitnessVector({1.0, 1.0})},
      {{0.0, 0.0}, {1.0, -1.0}}, ProbVector({0.5, 0.5}));
  CHECK_THROWS_AS(stationary_distribution(reducible), std::invalid_argument);
}

TEST_CASE("three-state stationary law matches simulated occupation") {
  const MarkovJumpEnvironment chain(
      {FitnessVector({0.1, 0.1}), FitnessVector({0.5, 0.5}), FitnessVector({0.9, 0.9})},
      {{-1.5, 1.0, 0.5}, {0.3, -0.8, 0.5}, {1.2, 0.8, -2.0}}, ProbVector({1.0, 0.0, 0.0}));
  const ProbVector pi = stationary_distribution(chain);
  const MarkovJumpEnvironment started = stationary_started(chain);

  const int replicates = 400;
  const double horizon = 25.0;
  std::vector<double> occupation(replicates);
  for (int rep = 0; rep < replicates; ++rep) {
    auto rng = make_rng(7, Stream::kEnvironment, static_cast<std::uint64_t>(rep));
    const EnvironmentPath path = sample_path(started, horizon, rng);
    double time0 = 0.0;
    for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
      const double end = i + 1 < path.jump_times.size() ? path.jump_times[i + 1] : horizon;
      if (path.values[i] == chain.states[0]) time0 += end - path.jump_times[i];
    }
    occupation[static_cast<std::size_t>(rep)] = time0 / horizon;
  }
  const Estimate est = summarize(occupation);
  CHECK(std::abs(est.mean - pi[0]) <= 3.0 * est.standard_error());
}

TEST_CASE("stationary start gives shift-invariant occupation fractions") {
  const MarkovJumpEnvironment started = stationary_started(two_state_symmetric(0.7));
  const int replicates = 400;
  std::vector<double> early(replicates), late(replicates);
  for (int rep = 0; rep < replicates; ++rep) {
    auto rng = make_rng(13, Stream::kEnvironment, static_cast<std::uint64_t>(rep));
    const EnvironmentPath path = sample_path(started, 25.0, rng);
    auto occupation = [&](double from, double to) {
      double time0 = 0.0;
      for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
        const double begin = std::max(path.jump_times[i], from);
        const double end =
            std::min(i + 1 < path.jump_times.size() ? path.jump_times[i + 1] : path.horizon, to);
        if (end > begin && path.values[i] == started.states[0]) time0 += end - begin;
      }
      return time0 / (to - from);
    };
    early[static_cast<std::size_t>(rep)] = occupation(0.0, 10.0);
    late[static_cast<std::size_t>(rep)] = occupation(15.0, 25.0);
  }
  const Estimate e1 = summarize(early);
  const Estimate e2 = summarize(late);
  const double pooled = std::sqrt(e1.variance / replicates + e2.variance / replicates);
  CHECK(std::abs(e1.mean - e2.mean) <= 3.0 * pooled);
}

TEST_CASE("time reversal preserves the stationary law and total flow") {
  const MarkovJumpEnvironment chain(
      {FitnessVector({0.1, 0.2}), FitnessVector({0.5, 0.6}), FitnessVector({0.9, 0.8})},
      {{-2.0, 1.5, 0.5}, {0.2, -0.7, 0.5}, {1.0, 2.0, -3.0}}, ProbVector({1.0, 0.0, 0.0}));
  const MarkovJumpEnvironment rev = time_reversed(chain);
  const ProbVector pi = stationary_distribution(chain);
  const ProbVector pi_rev = stationary_distribution(rev);
  for (int i = 0; i < 3; ++i) {
    CHECK(pi_rev[i] == doctest::Approx(pi[i]).epsilon(1e-9));
    // flow balance: pi_i * rev_ij = pi_j * q_ji
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(pi[i] * rev.rate_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            doctest::Approx(pi[j] *
                            chain.rate_matrix[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("path table round trip") {
  auto rng = make_rng(21, Stream::kEnvironment);
  const EnvironmentPath path = sample_path(two_state_symmetric(1.3), 12.5, rng);
  std::stringstream buffer;
  write_path(buffer, path);
  const EnvironmentPath back = read_path(buffer);
  REQUIRE(back.jump_times.size() == path.jump_times.size());
  CHECK(back.horizon == doctest::Approx(path.horizon).epsilon(1e-15));
  for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
    CHECK(back.jump_times[i] == doctest::Approx(path.jump_times[i]).epsilon(1e-15));
    CHECK(back.values[i] == path.values[i]);
  }
}
