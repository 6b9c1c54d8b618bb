#pragma once

#include <iosfwd>
#include <random>
#include <variant>
#include <vector>

#include "fvlab/types.hpp"

namespace fvlab {

// A realized fitness trajectory: right-continuous step function on
// [0, horizon] with values[i] on [jump_times[i], jump_times[i+1]).
struct EnvironmentPath {
  EnvironmentPath(std::vector<double> jump_times_in, std::vector<FitnessVector> values_in,
                  double horizon_in);

  int num_alleles() const { return values.front().size(); }

  // Right-continuous value; requires 0 <= t <= horizon.
  const FitnessVector& at(double t) const;
  // Left limit; requires 0 < t <= horizon. At a jump time this is the value
  // of the previous segment.
  const FitnessVector& left_limit(double t) const;

  std::vector<double> jump_times;  // strictly increasing, first entry 0
  std::vector<FitnessVector> values;
  double horizon;
};

// Finite-state Markov jump fitness process. An irreducible chain of this kind
// is weakly ergodic, which is what the ergodic experiments assume.
struct MarkovJumpEnvironment {
  MarkovJumpEnvironment(std::vector<FitnessVector> states_in,
                        std::vector<std::vector<double>> rate_matrix_in, ProbVector initial_in);

  int num_states() const { return static_cast<int>(states.size()); }
  int num_alleles() const { return states.front().size(); }

  std::vector<FitnessVector> states;
  std::vector<std::vector<double>> rate_matrix;  // off-diagonal >= 0, rows sum to 0
  ProbVector initial;                            // over states
};

using EnvironmentProcess = std::variant<FitnessVector, EnvironmentPath, MarkovJumpEnvironment>;

int environment_num_alleles(const EnvironmentProcess& proc);

// Realizes one trajectory on [0, horizon]. Constant and schedule variants do
// not consume randomness; the Markov variant draws its initial state and
// exponential holding times from rng.
EnvironmentPath sample_path(const EnvironmentProcess& proc, double horizon, std::mt19937_64& rng);

// Unique pi with pi * rate_matrix = 0; throws on a reducible chain.
ProbVector stationary_of_rate_matrix(const std::vector<std::vector<double>>& rate_matrix);
ProbVector stationary_distribution(const MarkovJumpEnvironment& chain);

// The same chain started from its stationary distribution.
MarkovJumpEnvironment stationary_started(const MarkovJumpEnvironment& chain);

// Time reversal of the stationary chain: rate'[i][j] = pi[j] rate[j][i] / pi[i].
// A stationary trajectory read backwards has the law of this chain.
MarkovJumpEnvironment time_reversed(const MarkovJumpEnvironment& chain);

// Plain text table: "# horizon H" followed by one "t w_0 ... w_{K-1}" row per
// segment.
void write_path(std::ostream& os, const EnvironmentPath& path);
EnvironmentPath read_path(std::istream& is);

}  // namespace fvlab
