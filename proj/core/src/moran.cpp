#include "fvlab/moran.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "fvlab/rng.hpp"

namespace fvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EventClock {
  EventClock(double rate_in, std::uint64_t seed) : rate(rate_in), rng(seed) {}

  void schedule_from(double t) {
    next = rate > 0.0 ? t + std::exponential_distribution<double>(rate)(rng) : kInf;
  }

  double rate;
  double next = kInf;
  std::mt19937_64 rng;
};

int uniform_index(std::mt19937_64& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

// Ordered pair (i, j), i != j, uniform over the N(N-1) possibilities.
std::pair<int, int> uniform_ordered_pair(std::mt19937_64& rng, int n) {
  const int i = uniform_index(rng, n);
  int j = uniform_index(rng, n - 1);
  if (j >= i) ++j;
  return {i, j};
}

int sample_from(const ProbVector& p, std::mt19937_64& rng) {
  const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (int a = 0; a + 1 < p.size(); ++a) {
    acc += p[a];
    if (x < acc) return a;
  }
  return p.size() - 1;
}

int sample_from_row(const std::vector<double>& row, std::mt19937_64& rng) {
  const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t a = 0; a + 1 < row.size(); ++a) {
    acc += row[a];
    if (x < acc) return static_cast<int>(a);
  }
  return static_cast<int>(row.size()) - 1;
}

}  // namespace

ParticleState::ParticleState(std::vector<int> alleles_in, double time_in)
    : alleles(std::move(alleles_in)), time(time_in) {
  if (alleles.empty()) throw std::invalid_argument("ParticleState: empty population");
}

EmpiricalMeasure empirical_measure(const ParticleState& state, int num_alleles) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_alleles), 0);
  for (int a : state.alleles) {
    if (a < 0 || a >= num_alleles) {
      throw std::invalid_argument("empirical_measure: allele out of range");
    }
    counts[static_cast<std::size_t>(a)]++;
  }
  return EmpiricalMeasure(std::move(counts));
}

ParticleState make_initial_state(const MoranInit& init, const ModelParams& params,
                                 std::mt19937_64& rng) {
  const int k = params.num_alleles();
  if (const auto* explicit_alleles = std::get_if<std::vector<int>>(&init)) {
    if (static_cast<int>(explicit_alleles->size()) != params.population) {
      throw std::invalid_argument("make_initial_state: allele vector length != N");
    }
    for (int a : *explicit_alleles) {
      if (a < 0 || a >= k) throw std::invalid_argument("make_initial_state: allele out of range");
    }
    return ParticleState(*explicit_alleles);
  }
  const auto& law = std::get<ProbVector>(init);
  if (law.size() != k) throw std::invalid_argument("make_initial_state: law has wrong size");
  std::vector<int> alleles(static_cast<std::size_t>(params.population));
  for (int& a : alleles) a = sample_from(law, rng);
  return ParticleState(std::move(alleles));
}

MoranTrajectory simulate_moran(const ModelParams& params, const EnvironmentPath& env,
                               const ParticleState& init, double horizon,
                               std::span<const double> sample_times, std::mt19937_64& rng) {
  const int n = params.population;
  const int k = params.num_alleles();
  if (static_cast<int>(init.alleles.size()) != n) {
    throw std::invalid_argument("simulate_moran: state size != N");
  }
  if (env.num_alleles() != k) {
    throw std::invalid_argument("simulate_moran: environment allele count mismatch");
  }
  if (horizon > env.horizon) {
    throw std::invalid_argument("simulate_moran: horizon exceeds environment path");
  }
  if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
    throw std::invalid_argument("simulate_moran: sample times must be sorted");
  }
  for (double s : sample_times) {
    if (s < init.time || s > horizon) {
      throw std::invalid_argument("simulate_moran: sample time out of range");
    }
  }
  for (int a : init.alleles) {
    if (a < 0 || a >= k) throw std::invalid_argument("simulate_moran: allele out of range");
  }

  std::vector<int> alleles = init.alleles;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  for (int a : alleles) counts[static_cast<std::size_t>(a)]++;

  const double nd = static_cast<double>(n);
  // rate gamma/2 per ordered pair, beta per individual, alpha/N per ordered pair
  EventClock resampling(nd * (nd - 1.0) * params.gamma / 2.0, rng());
  EventClock mutation(nd * params.kernel.beta(), rng());
  EventClock selection((nd - 1.0) * params.alpha, rng());

  double t = init.time;
  resampling.schedule_from(t);
  mutation.schedule_from(t);
  selection.schedule_from(t);

  MoranTrajectory traj;
  std::size_t si = 0;
  auto record_until = [&](double bound) {
    while (si < sample_times.size() && sample_times[si] < bound) {
      traj.sample_times.push_back(sample_times[si]);
      traj.measures.push_back(EmpiricalMeasure(counts));
      ++si;
    }
  };

  const double prob_parent_indep =
      params.kernel.beta_prime / params.kernel.beta();  // beta > 0 by construction

  while (true) {
    EventClock* first = &resampling;
    if (mutation.next < first->next) first = &mutation;
    if (selection.next < first->next) first = &selection;
    if (first->next > horizon) break;
    t = first->next;
    record_until(t);  // sample times strictly before the event see the pre-event state

    if (first == &resampling) {
      auto [i, j] = uniform_ordered_pair(first->rng, n);
      counts[static_cast<std::size_t>(alleles[static_cast<std::size_t>(j)])]--;
      alleles[static_cast<std::size_t>(j)] = alleles[static_cast<std::size_t>(i)];
      counts[static_cast<std::size_t>(alleles[static_cast<std::size_t>(j)])]++;
    } else if (first == &mutation) {
      const int i = uniform_index(first->rng, n);
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(first->rng);
      int target;
      if (u < prob_parent_indep) {
        target = sample_from(params.kernel.q_prime, first->rng);
      } else {
        const int from = alleles[static_cast<std::size_t>(i)];
        target = sample_from_row(params.kernel.q_double_prime[static_cast<std::size_t>(from)],
                                 first->rng);
      }
      counts[static_cast<std::size_t>(alleles[static_cast<std::size_t>(i)])]--;
      alleles[static_cast<std::size_t>(i)] = target;
      counts[static_cast<std::size_t>(target)]++;
    } else {
      auto [i, j] = uniform_ordered_pair(first->rng, n);
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(first->rng);
      const double w = env.at(t)[alleles[static_cast<std::size_t>(i)]];
      if (u < w) {
        counts[static_cast<std::size_t>(alleles[static_cast<std::size_t>(j)])]--;
        alleles[static_cast<std::size_t>(j)] = alleles[static_cast<std::size_t>(i)];
        counts[static_cast<std::size_t>(alleles[static_cast<std::size_t>(j)])]++;
      }
    }
    first->schedule_from(t);
  }
  record_until(kInf);
  return traj;
}

void write_trajectory(std::ostream& os, const MoranTrajectory& traj) {
  os.precision(17);
  for (std::size_t i = 0; i < traj.sample_times.size(); ++i) {
    os << traj.sample_times[i];
    for (std::int64_t c : traj.measures[i].counts()) os << " " << c;
    os << "\n";
  }
}

Estimate estimate_moran_moment(const ModelParams& params, const EnvironmentProcess& env_proc,
                               const MoranInit& init, const DualFunction& f, double t,
                               std::int64_t replicates, std::uint64_t seed, bool quenched,
                               int threads) {
  if (replicates < 1) throw std::invalid_argument("estimate_moran_moment: need replicates >= 1");
  if (f.num_alleles() != params.num_alleles()) {
    throw std::invalid_argument("estimate_moran_moment: allele count mismatch");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("estimate_moran_moment: negative time");

  std::optional<EnvironmentPath> shared_path;
  if (quenched) {
    auto env_rng = make_rng(seed, Stream::kQuenchedEnvironment);
    shared_path = sample_path(env_proc, std::max(t, 1e-9), env_rng);
  }
  const std::vector<double> times{t};
  return run_replicates(replicates, threads, [&](std::int64_t rep) {
    auto sim_rng = make_rng(seed, Stream::kMoranEvents, static_cast<std::uint64_t>(rep));
    const ParticleState state = make_initial_state(init, params, sim_rng);
    if (t == 0.0) {
      return product_moment(empirical_measure(state, params.num_alleles()).frequencies(), f);
    }
    if (quenched) {
      const MoranTrajectory traj = simulate_moran(params, *shared_path, state, t, times, sim_rng);
      return product_moment(traj.measures.front().frequencies(), f);
    }
    auto env_rng = make_rng(seed, Stream::kEnvironment, static_cast<std::uint64_t>(rep));
    const EnvironmentPath path = sample_path(env_proc, t, env_rng);
    const MoranTrajectory traj = simulate_moran(params, path, state, t, times, sim_rng);
    return product_moment(traj.measures.front().frequencies(), f);
  });
}

}  // namespace fvlab
