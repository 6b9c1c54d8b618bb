#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "fvlab/environment.hpp"
#include "fvlab/estimate.hpp"
#include "fvlab/types.hpp"

namespace fvlab {

struct ParticleState {
  ParticleState(std::vector<int> alleles_in, double time_in = 0.0);

  std::vector<int> alleles;
  double time;
};

struct MoranTrajectory {
  std::vector<double> sample_times;
  std::vector<EmpiricalMeasure> measures;
};

// Initial condition: explicit allele vector, or N iid draws from a law.
using MoranInit = std::variant<std::vector<int>, ProbVector>;

EmpiricalMeasure empirical_measure(const ParticleState& state, int num_alleles);

ParticleState make_initial_state(const MoranInit& init, const ModelParams& params,
                                 std::mt19937_64& rng);

// Event-driven simulation of the particle process in the quenched
// environment `env`. Events are the superposition of three independent
// Poisson streams (resampling, mutation, candidate selection), each driven by
// its own generator derived from rng; the environment enters only through
// selection acceptance. The recorded measures are right-continuous in time.
MoranTrajectory simulate_moran(const ModelParams& params, const EnvironmentPath& env,
                               const ParticleState& init, double horizon,
                               std::span<const double> sample_times, std::mt19937_64& rng);

// One row per sample time: "t c_0 ... c_{K-1}".
void write_trajectory(std::ostream& os, const MoranTrajectory& traj);

// Monte Carlo estimate of E[<mu_N(t)^(x)n, f>]. Quenched mode shares one
// sampled environment path across replicates; annealed mode samples a fresh
// path per replicate. Replicate r uses generators derived from (seed, r).
Estimate estimate_moran_moment(const ModelParams& params, const EnvironmentProcess& env_proc,
                               const MoranInit& init, const DualFunction& f, double t,
                               std::int64_t replicates, std::uint64_t seed, bool quenched,
                               int threads);

}  // namespace fvlab
