#include "fvlab/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "fvlab/rng.hpp"

namespace fvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Hard stop for the until-absorbed engine; with beta' > 0 absorption happens
// many orders of magnitude sooner.
constexpr std::int64_t kMaxDualJumps = 100'000'000;

void check_slot(const DualFunction& f, int i, const char* what) {
  if (f.degree() < 1) throw std::invalid_argument(std::string(what) + ": degree must be >= 1");
  if (i < 0 || i >= f.degree()) throw std::invalid_argument(std::string(what) + ": index out of range");
}

}  // namespace

const char* to_string(DualJumpKind kind) {
  switch (kind) {
    case DualJumpKind::kResample: return "resample";
    case DualJumpKind::kMutationParentIndep: return "mutP";
    case DualJumpKind::kMutationParentDep: return "mutPP";
    case DualJumpKind::kSelection: return "select";
  }
  return "?";
}

DualFunction apply_resampling(const DualFunction& f, int i, int j) {
  if (f.degree() < 2) throw std::invalid_argument("apply_resampling: degree must be >= 2");
  if (i == j) throw std::invalid_argument("apply_resampling: i == j");
  if (i < 0 || i >= f.degree() || j < 0 || j >= f.degree()) {
    throw std::invalid_argument("apply_resampling: index out of range");
  }
  return f.merged(i, j).canonicalized();
}

DualFunction apply_parent_indep_mutation(const DualFunction& f, int i, const ProbVector& q_prime) {
  check_slot(f, i, "apply_parent_indep_mutation");
  if (q_prime.size() != f.num_alleles()) {
    throw std::invalid_argument("apply_parent_indep_mutation: law size mismatch");
  }
  return f.contracted(i, q_prime.data()).canonicalized();
}

DualFunction apply_parent_dep_mutation(const DualFunction& f, int i,
                                       const std::vector<std::vector<double>>& q_double_prime) {
  check_slot(f, i, "apply_parent_dep_mutation");
  if (static_cast<int>(q_double_prime.size()) != f.num_alleles()) {
    throw std::invalid_argument("apply_parent_dep_mutation: kernel size mismatch");
  }
  for (const auto& row : q_double_prime) {
    double sum = 0.0;
    for (double x : row) {
      if (!(x >= 0.0)) throw std::invalid_argument("apply_parent_dep_mutation: negative entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
      throw std::invalid_argument("apply_parent_dep_mutation: kernel row not stochastic");
    }
  }
  return f.kernel_applied(i, q_double_prime).canonicalized();
}

DualFunction apply_selection(const DualFunction& f, int i, const FitnessVector& w) {
  check_slot(f, i, "apply_selection");
  if (w.size() != f.num_alleles()) throw std::invalid_argument("apply_selection: fitness size mismatch");
  const int n = f.degree();
  const int k = f.num_alleles();
  const std::size_t out_size = f.size() * static_cast<std::size_t>(k);
  std::vector<double> out(out_size);
  std::vector<int> x(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> kept(static_cast<std::size_t>(n), 0);   // x with slot i removed
  std::vector<int> first(static_cast<std::size_t>(n), 0);  // x_1..x_n
  std::size_t off = 0;
  while (true) {
    for (int s = 0; s < n; ++s) {
      first[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(s)];
      kept[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(s < i ? s : s + 1)];
    }
    const double wi = w[x[static_cast<std::size_t>(i)]];
    out[off] = wi * f.at(first) + (1.0 - wi) * f.at(kept);
    ++off;
    int s = n;
    for (; s >= 0; --s) {
      if (++x[static_cast<std::size_t>(s)] < k) break;
      x[static_cast<std::size_t>(s)] = 0;
    }
    if (s < 0) break;
  }
  return DualFunction(f.num_alleles(), n + 1, std::move(out)).canonicalized();
}

namespace {

// Shared engine: environment enters only through the lookup; jump times,
// kinds and indices are functions of rng alone as long as canonical degrees
// are environment-independent.
DualState run_dual_engine(const ModelParams& params,
                          const std::function<FitnessVector(double)>& fitness_at_jump,
                          double horizon, const DualFunction& init, std::mt19937_64& rng,
                          int degree_cap) {
  if (init.num_alleles() != params.num_alleles()) {
    throw std::invalid_argument("simulate_dual: allele count mismatch");
  }
  if (init.degree() > degree_cap) {
    throw DegreeCapExceeded("simulate_dual: initial degree exceeds cap");
  }

  DualState state{init.canonicalized(), horizon, 0.0, {}, false, 0};
  std::int64_t steps = 0;
  while (true) {
    const int n = state.f.degree();
    if (n == 0) {
      state.absorbed = true;
      break;
    }
    const double nd = static_cast<double>(n);
    const double rate_res = nd * (nd - 1.0) * params.gamma / 2.0;
    const double rate_mut_p = nd * params.kernel.beta_prime;
    const double rate_mut_pp = nd * params.kernel.beta_double_prime;
    const double rate_sel = nd * params.alpha;
    const double total = rate_res + rate_mut_p + rate_mut_pp + rate_sel;

    const double dt = std::exponential_distribution<double>(total)(rng);
    if (state.elapsed + dt >= horizon) {
      state.elapsed = horizon;
      break;
    }
    state.elapsed += dt;
    if (++steps > kMaxDualJumps) {
      throw std::runtime_error("dual engine: jump budget exhausted before absorption");
    }

    const double pick = std::uniform_real_distribution<double>(0.0, total)(rng);
    const double old_norm = state.f.sup_norm();
    DualJump jump{state.elapsed, DualJumpKind::kResample, 0, -1, 0};
    if (pick < rate_res) {
      const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
      int j = std::uniform_int_distribution<int>(0, n - 2)(rng);
      if (j >= i) ++j;
      jump.kind = DualJumpKind::kResample;
      jump.index_i = i;
      jump.index_j = j;
      state.f = apply_resampling(state.f, i, j);
    } else if (pick < rate_res + rate_mut_p) {
      const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
      jump.kind = DualJumpKind::kMutationParentIndep;
      jump.index_i = i;
      state.f = apply_parent_indep_mutation(state.f, i, params.kernel.q_prime);
    } else if (pick < rate_res + rate_mut_p + rate_mut_pp) {
      const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
      jump.kind = DualJumpKind::kMutationParentDep;
      jump.index_i = i;
      state.f = apply_parent_dep_mutation(state.f, i, params.kernel.q_double_prime);
    } else {
      if (n + 1 > degree_cap) {
        throw DegreeCapExceeded("simulate_dual: selection birth beyond degree cap " +
                                std::to_string(degree_cap));
      }
      const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
      jump.kind = DualJumpKind::kSelection;
      jump.index_i = i;
      state.f = apply_selection(state.f, i, fitness_at_jump(state.elapsed));
    }
    if (state.f.sup_norm() > old_norm + 1e-12 * std::max(1.0, old_norm)) {
      state.sup_norm_violations++;
    }
    jump.degree_after = state.f.degree();
    state.jump_log.push_back(jump);
  }
  return state;
}

}  // namespace

DualState simulate_dual(const ModelParams& params, const EnvironmentPath& env, double horizon,
                        const DualFunction& init, std::mt19937_64& rng, int degree_cap) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("simulate_dual: negative horizon");
  if (horizon > env.horizon) {
    throw std::invalid_argument("simulate_dual: horizon exceeds environment path");
  }
  if (env.num_alleles() != params.num_alleles()) {
    throw std::invalid_argument("simulate_dual: environment allele count mismatch");
  }
  // Jump at elapsed time s reads the environment at forward time horizon - s,
  // through its left limit.
  auto lookup = [&](double s) { return env.left_limit(horizon - s); };
  return run_dual_engine(params, lookup, horizon, init, rng, degree_cap);
}

double dual_moment(const ProbVector& m0, const DualState& state) {
  if (!state.absorbed && state.elapsed < state.horizon) {
    throw std::logic_error("dual_moment: state is neither frozen nor absorbed");
  }
  return product_moment(m0, state.f);
}

namespace {

// Stationary chain sampled lazily along dual time. Feeding the dual the
// time-reversed chain started from its stationary law is equivalent, jointly
// over all lookup times, to reading a stationary forward trajectory backwards
// from any sufficiently late anchor; that removes the fixed horizon entirely.
class LazyStationaryLookup {
 public:
  LazyStationaryLookup(const MarkovJumpEnvironment& chain, std::mt19937_64& rng)
      : chain_(time_reversed(chain)), rng_(&rng) {
    state_ = sample_initial(chain_.initial);
    built_until_ = next_holding_time();
  }

  FitnessVector operator()(double s) {
    while (s >= built_until_) {
      advance();
    }
    return chain_.states[static_cast<std::size_t>(state_)];
  }

 private:
  int sample_initial(const ProbVector& p) {
    const double x = std::uniform_real_distribution<double>(0.0, 1.0)(*rng_);
    double acc = 0.0;
    for (int i = 0; i + 1 < p.size(); ++i) {
      acc += p[i];
      if (x < acc) return i;
    }
    return p.size() - 1;
  }

  double next_holding_time() {
    const double hold =
        -chain_.rate_matrix[static_cast<std::size_t>(state_)][static_cast<std::size_t>(state_)];
    if (hold <= 0.0) return kInf;
    return std::exponential_distribution<double>(hold)(*rng_);
  }

  void advance() {
    const auto& row = chain_.rate_matrix[static_cast<std::size_t>(state_)];
    const double hold = -row[static_cast<std::size_t>(state_)];
    const double x = std::uniform_real_distribution<double>(0.0, hold)(*rng_);
    double acc = 0.0;
    int next = chain_.num_states() - 1;
    for (int j = 0; j < chain_.num_states(); ++j) {
      if (j == state_) continue;
      acc += row[static_cast<std::size_t>(j)];
      if (x < acc) {
        next = j;
        break;
      }
    }
    state_ = next;
    built_until_ += next_holding_time();
  }

  MarkovJumpEnvironment chain_;
  std::mt19937_64* rng_;
  int state_;
  double built_until_;
};

}  // namespace

DualState simulate_dual_until_absorbed(const ModelParams& params,
                                       const MarkovJumpEnvironment& chain,
                                       const DualFunction& init, std::mt19937_64& env_rng,
                                       std::mt19937_64& event_rng, int degree_cap) {
  if (!(params.kernel.beta_prime > 0.0)) {
    throw std::invalid_argument(
        "simulate_dual_until_absorbed: absorption needs a parent-independent mutation component");
  }
  LazyStationaryLookup lookup(chain, env_rng);
  return run_dual_engine(
      params, [&](double s) { return lookup(s); }, kInf, init, event_rng, degree_cap);
}

Estimate estimate_dual_limit(const ModelParams& params, const MarkovJumpEnvironment& chain,
                             const DualFunction& init, std::int64_t replicates,
                             std::uint64_t seed, int threads, int degree_cap) {
  if (replicates < 1) throw std::invalid_argument("estimate_dual_limit: need replicates >= 1");
  if (init.num_alleles() != params.num_alleles() || chain.num_alleles() != params.num_alleles()) {
    throw std::invalid_argument("estimate_dual_limit: allele count mismatch");
  }
  stationary_distribution(chain);  // rejects non-ergodic environments up front
  return run_replicates(replicates, threads, [&](std::int64_t rep) {
    auto env_rng = make_rng(seed, Stream::kEnvironment, static_cast<std::uint64_t>(rep));
    auto event_rng = make_rng(seed, Stream::kDualEvents, static_cast<std::uint64_t>(rep));
    const DualState st =
        simulate_dual_until_absorbed(params, chain, init, env_rng, event_rng, degree_cap);
    return st.f.scalar();
  });
}

void write_jump_log(std::ostream& os, const DualState& state) {
  os.precision(17);
  os << "# absorbed " << (state.absorbed ? 1 : 0) << " elapsed " << state.elapsed;
  if (state.absorbed) os << " value " << state.f.scalar();
  os << "\n";
  for (const auto& jump : state.jump_log) {
    os << jump.time << " " << to_string(jump.kind) << " " << jump.index_i << " " << jump.index_j
       << " " << jump.degree_after << "\n";
  }
}

}  // namespace fvlab
