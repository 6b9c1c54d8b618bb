#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <vector>

#include "fvlab/environment.hpp"
#include "fvlab/estimate.hpp"
#include "fvlab/types.hpp"

namespace fvlab {

// Raised when a selection birth would push the dual past its degree cap.
struct DegreeCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultDegreeCap = 32;

enum class DualJumpKind { kResample, kMutationParentIndep, kMutationParentDep, kSelection };

const char* to_string(DualJumpKind kind);

struct DualJump {
  double time;
  DualJumpKind kind;
  int index_i;
  int index_j;  // -1 for single-index jumps
  int degree_after;
};

struct DualState {
  DualFunction f;
  double horizon;
  double elapsed;
  std::vector<DualJump> jump_log;
  bool absorbed;
  // Jumps that increased the sup norm beyond rounding tolerance. Expected to
  // stay 0; every jump map is a convex/averaging restriction.
  int sup_norm_violations;
};

// Jump maps. All indices are 0-based slots of f and all results are returned
// in canonical form.

// f -> f after identifying variable j with variable i and deleting slot j.
DualFunction apply_resampling(const DualFunction& f, int i, int j);

// f -> contraction of slot i against the parent-independent law q'.
DualFunction apply_parent_indep_mutation(const DualFunction& f, int i, const ProbVector& q_prime);

// f -> f with the row-stochastic kernel applied along slot i.
DualFunction apply_parent_dep_mutation(const DualFunction& f, int i,
                                       const std::vector<std::vector<double>>& q_double_prime);

// f -> w(x_i) f(x_1..x_n) + (1 - w(x_i)) f(x_1..x_{i-1}, x_{i+1}..x_{n+1}).
DualFunction apply_selection(const DualFunction& f, int i, const FitnessVector& w);

// Backward jump engine. From degree n the jump rates are n(n-1)*gamma/2
// (resampling, uniform ordered pair), n*beta' (parent-independent mutation),
// n*beta'' (parent-dependent mutation) and n*alpha (selection). A selection
// at elapsed time s uses the left limit of the environment at forward time
// horizon - s. The process freezes at elapsed = horizon and is absorbed once
// the canonical degree reaches 0.
DualState simulate_dual(const ModelParams& params, const EnvironmentPath& env, double horizon,
                        const DualFunction& init, std::mt19937_64& rng,
                        int degree_cap = kDefaultDegreeCap);

// <m0^(x)n, psi>. Valid once the state is frozen or absorbed; the duality
// carries no Feynman-Kac factor.
double dual_moment(const ProbVector& m0, const DualState& state);

// Runs the dual against a stationary realization of the chain until
// absorption, extending the environment on demand. Requires beta' > 0 and an
// irreducible chain.
DualState simulate_dual_until_absorbed(const ModelParams& params,
                                       const MarkovJumpEnvironment& chain,
                                       const DualFunction& init, std::mt19937_64& env_rng,
                                       std::mt19937_64& event_rng,
                                       int degree_cap = kDefaultDegreeCap);

// Monte Carlo mean of the absorbed constant over stationary-environment dual
// runs; estimates the common long-time limit of the forward moments for every
// initial measure.
Estimate estimate_dual_limit(const ModelParams& params, const MarkovJumpEnvironment& chain,
                             const DualFunction& init, std::int64_t replicates,
                             std::uint64_t seed, int threads,
                             int degree_cap = kDefaultDegreeCap);

// One row per jump: "time kind i j degree_after".
void write_jump_log(std::ostream& os, const DualState& state);

}  // namespace fvlab
