#include "fvlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fvlab/dual.hpp"
#include "fvlab/generators.hpp"
#include "fvlab/moran.hpp"
#include "fvlab/rng.hpp"

namespace fvlab {

namespace {

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Wraps invalid_argument from value constructors into config errors so the
// CLI maps them to exit code 2.
template <class Fn>
auto checked(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

ModelParams parse_model(Config& cfg) {
  return checked("model", [&] {
    const int k = static_cast<int>(cfg.get_int("alleles"));
    TypeSpace space(k);
    const double beta_prime = cfg.get_double("model.beta_prime");
    const double beta_double_prime = cfg.get_double_or("model.beta_double_prime", 0.0);
    ProbVector q_prime(cfg.get_doubles("model.q_prime"));
    std::vector<std::vector<double>> q_double_prime;
    if (cfg.has("model.q_double_prime.row0")) {
      for (int r = 0; r < k; ++r) {
        q_double_prime.push_back(cfg.get_doubles("model.q_double_prime.row" + std::to_string(r)));
      }
    } else {
      for (int r = 0; r < k; ++r) {
        std::vector<double> row(static_cast<std::size_t>(k), 0.0);
        row[static_cast<std::size_t>(r)] = 1.0;
        q_double_prime.push_back(std::move(row));
      }
    }
    MutationKernel kernel(beta_prime, beta_double_prime, std::move(q_prime),
                          std::move(q_double_prime));
    if (kernel.num_alleles() != space.num_alleles) {
      throw std::invalid_argument("mutation kernel size does not match alleles");
    }
    return ModelParams(cfg.get_double("model.gamma"), cfg.get_double_or("model.alpha", 0.0),
                       static_cast<int>(cfg.get_int_or("model.population", 2)), std::move(kernel));
  });
}

EnvironmentProcess parse_environment(Config& cfg, int num_alleles) {
  return checked("env", [&]() -> EnvironmentProcess {
    const std::string kind = cfg.get_string_or("env.kind", "constant");
    if (kind == "constant") {
      FitnessVector w(cfg.get_doubles("env.fitness"));
      if (w.size() != num_alleles) throw std::invalid_argument("env.fitness has wrong length");
      return w;
    }
    if (kind == "schedule") {
      const std::string file = cfg.get_string("env.path_file");
      std::ifstream in(file);
      if (!in) throw std::invalid_argument("cannot open env.path_file: " + file);
      EnvironmentPath path = read_path(in);
      if (path.num_alleles() != num_alleles) {
        throw std::invalid_argument("environment path allele count mismatch");
      }
      return path;
    }
    if (kind == "markov") {
      const int s = static_cast<int>(cfg.get_int("env.num_states"));
      if (s < 1) throw std::invalid_argument("env.num_states must be positive");
      std::vector<FitnessVector> states;
      std::vector<std::vector<double>> rates;
      for (int i = 0; i < s; ++i) {
        states.emplace_back(cfg.get_doubles("env.state" + std::to_string(i) + ".fitness"));
        if (states.back().size() != num_alleles) {
          throw std::invalid_argument("env state fitness has wrong length");
        }
        rates.push_back(cfg.get_doubles("env.rate_matrix.row" + std::to_string(i)));
      }
      const std::string init = cfg.get_string_or("env.initial", "uniform");
      ProbVector initial({1.0});
      if (init == "uniform") {
        initial = ProbVector(std::vector<double>(static_cast<std::size_t>(s), 1.0 / s));
      } else if (init == "stationary") {
        initial = stationary_of_rate_matrix(rates);
      } else {
        std::istringstream is(init);
        std::vector<double> p;
        double x;
        while (is >> x) p.push_back(x);
        initial = ProbVector(std::move(p));
      }
      return MarkovJumpEnvironment(std::move(states), std::move(rates), std::move(initial));
    }
    throw std::invalid_argument("env.kind must be constant, schedule or markov");
  });
}

// Any environment as a Markov chain, for the stationary dual-limit engine.
MarkovJumpEnvironment as_markov_chain(const EnvironmentProcess& proc) {
  if (const auto* chain = std::get_if<MarkovJumpEnvironment>(&proc)) return *chain;
  if (const auto* constant = std::get_if<FitnessVector>(&proc)) {
    return MarkovJumpEnvironment({*constant}, {{0.0}}, ProbVector({1.0}));
  }
  throw ConfigError("this experiment needs a constant or markov environment");
}

DualFunction parse_function(Config& cfg, int num_alleles, const std::string& prefix = "f") {
  return checked(prefix, [&] {
    const std::string kind = cfg.get_string_or(prefix + ".kind", "indicator");
    if (kind == "indicator") {
      return DualFunction::indicator(num_alleles,
                                     static_cast<int>(cfg.get_int_or(prefix + ".allele", 0)));
    }
    if (kind == "constant") {
      return DualFunction::constant(num_alleles, cfg.get_double(prefix + ".value"));
    }
    if (kind == "tensor") {
      const int degree = static_cast<int>(cfg.get_int(prefix + ".degree"));
      return DualFunction(num_alleles, degree, cfg.get_doubles(prefix + ".tensor"));
    }
    throw std::invalid_argument("kind must be indicator, constant or tensor");
  });
}

MoranInit parse_init(Config& cfg, int num_alleles, int population) {
  return checked("init", [&]() -> MoranInit {
    const std::string kind = cfg.get_string_or("init.kind", "iid");
    if (kind == "counts") {
      const std::vector<double> raw = cfg.get_doubles("init.counts");
      if (static_cast<int>(raw.size()) != num_alleles) {
        throw std::invalid_argument("init.counts has wrong length");
      }
      std::vector<int> alleles;
      for (int a = 0; a < num_alleles; ++a) {
        const double c = raw[static_cast<std::size_t>(a)];
        if (c < 0.0 || c != std::floor(c)) {
          throw std::invalid_argument("init.counts entries must be nonnegative integers");
        }
        alleles.insert(alleles.end(), static_cast<std::size_t>(c), a);
      }
      if (static_cast<int>(alleles.size()) != population) {
        throw std::invalid_argument("init.counts must sum to the population size");
      }
      return alleles;
    }
    if (kind == "iid") {
      ProbVector p(cfg.get_doubles("init.probs"));
      if (p.size() != num_alleles) throw std::invalid_argument("init.probs has wrong length");
      return p;
    }
    throw std::invalid_argument("init.kind must be counts or iid");
  });
}

double binomial_band(double p, double replicates) {
  return 3.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / replicates);
}

double fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

struct CommonArgs {
  std::uint64_t seed;
  int threads;
};

CommonArgs parse_common(Config& cfg) {
  CommonArgs args;
  if (!cfg.has("seed")) throw ConfigError("missing config key 'seed' (master seed is mandatory)");
  args.seed = cfg.get_u64("seed");
  args.threads = static_cast<int>(cfg.get_int_or("threads", 0));
  return args;
}

void finish(Report& report, Config& cfg, const WallClock& clock) {
  cfg.check_all_consumed();
  report.config_echo = cfg.entries();
  report.wall_seconds = clock.seconds();
}

}  // namespace

Report run_duality_check(Config& cfg) {
  WallClock clock;
  Report report;
  report.experiment = "duality-check";

  const CommonArgs common = parse_common(cfg);
  const ModelParams params = parse_model(cfg);
  const int k = params.num_alleles();
  const EnvironmentProcess env_proc = parse_environment(cfg, k);
  const DualFunction f = parse_function(cfg, k).canonicalized();
  const double t = cfg.get_double_or("time", 1.0);
  const std::int64_t replicates = cfg.get_int_or("replicates", 100000);
  const std::string mode = cfg.get_string_or("mode", "quenched");
  const double bias_c = cfg.get_double_or("bias_allowance_c", 0.5);
  const int degree_cap = static_cast<int>(cfg.get_int_or("degree_cap", kDefaultDegreeCap));
  if (mode != "quenched" && mode != "annealed") {
    throw ConfigError("mode must be quenched or annealed");
  }
  const bool quenched = mode == "quenched";
  const std::string export_file = cfg.get_string_or("env.export_file", "");
  if (!(t >= 0.0)) throw ConfigError("time must be nonnegative");

  const MoranInit init = parse_init(cfg, k, params.population);
  const auto* counts = std::get_if<std::vector<int>>(&init);
  if (counts == nullptr) {
    throw ConfigError("duality-check needs init.kind = counts (a deterministic initial measure)");
  }
  std::mt19937_64 dummy(0);
  const ProbVector m0 =
      empirical_measure(make_initial_state(init, params, dummy), k).frequencies();

  // Forward side, with the quenched path shared by both estimators.
  std::optional<EnvironmentPath> shared_path;
  EnvironmentProcess forward_env = env_proc;
  if (quenched) {
    auto env_rng = make_rng(common.seed, Stream::kQuenchedEnvironment);
    shared_path = sample_path(env_proc, std::max(t, 1e-9), env_rng);
    forward_env = *shared_path;
    if (!export_file.empty()) {
      std::ofstream out(export_file);
      write_path(out, *shared_path);
    }
  }
  const Estimate forward = estimate_moran_moment(params, forward_env, init, f, t, replicates,
                                                 common.seed, quenched, common.threads);

  // Backward side.
  std::atomic<std::int64_t> violations{0};
  const Estimate backward = run_replicates(replicates, common.threads, [&](std::int64_t rep) {
    auto rng = make_rng(common.seed, Stream::kDualEvents, static_cast<std::uint64_t>(rep));
    const EnvironmentPath* path = shared_path ? &*shared_path : nullptr;
    std::optional<EnvironmentPath> own;
    if (path == nullptr) {
      auto env_rng = make_rng(common.seed, Stream::kDualEnvironment, static_cast<std::uint64_t>(rep));
      own = sample_path(env_proc, std::max(t, 1e-9), env_rng);
      path = &*own;
    }
    const DualState st = simulate_dual(params, *path, t, f, rng, degree_cap);
    violations += st.sup_norm_violations;
    return dual_moment(m0, st);
  });

  const double diff = forward.mean - backward.mean;
  const double pooled_se = std::sqrt(forward.variance / static_cast<double>(forward.count) +
                                     backward.variance / static_cast<double>(backward.count));
  const double band = 3.0 * pooled_se + bias_c / static_cast<double>(params.population);

  report.add_estimate("forward_moment", forward);
  report.add_estimate("backward_moment", backward);
  report.add_value("difference", diff);
  report.add_value("pooled_se", pooled_se);
  report.add_value("bias_allowance", bias_c / static_cast<double>(params.population));
  report.add_value("band", band);
  report.add_value("dual_sup_norm_violations", static_cast<double>(violations.load()));
  report.add_verdict("duality_gap", diff, band,
                     "|forward - backward| <= 3*pooled_se + c/N, c = " + std::to_string(bias_c));
  report.add_flag_verdict("dual_sup_norm_monotone", violations.load() == 0,
                          "no jump increased the dual sup norm");
  finish(report, cfg, clock);
  return report;
}

Report run_generator_check(Config& cfg) {
  WallClock clock;
  Report report;
  report.experiment = "generator-check";

  const CommonArgs common = parse_common(cfg);
  const std::int64_t instances = cfg.get_int_or("instances", 200);
  const double gap_tol = 1e-10;  // identity contract, fixed

  auto rng = make_rng(common.seed, Stream::kInstanceSweep);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> signed_unit(-1.0, 1.0);

  double max_gap = 0.0;
  double max_bound_excess = -1.0;
  for (std::int64_t inst = 0; inst < instances; ++inst) {
    const int k = 2 + static_cast<int>(rng() % 3);      // K in {2,3,4}
    const int degree = static_cast<int>(rng() % 5);     // degree in {0,...,4}
    std::size_t size = 1;
    for (int d = 0; d < degree; ++d) size *= static_cast<std::size_t>(k);
    std::vector<double> tensor(size);
    for (double& x : tensor) x = signed_unit(rng);
    const DualFunction f(k, degree, std::move(tensor));

    std::vector<double> raw(static_cast<std::size_t>(k));
    double total = 0.0;
    for (double& x : raw) {
      x = -std::log(unit(rng));
      total += x;
    }
    for (double& x : raw) x /= total;
    const ProbVector m(std::move(raw));

    std::vector<double> w(static_cast<std::size_t>(k));
    for (double& x : w) x = unit(rng);
    const FitnessVector w_hat(std::move(w));

    const double gamma = 0.1 + 1.9 * unit(rng);
    const double alpha = 2.0 * unit(rng);
    const double beta_prime = 0.1 + 1.9 * unit(rng);
    const double beta_double_prime = 2.0 * unit(rng);
    std::vector<double> q_prime_raw(static_cast<std::size_t>(k));
    double qp_total = 0.0;
    for (double& x : q_prime_raw) {
      x = -std::log(unit(rng));
      qp_total += x;
    }
    for (double& x : q_prime_raw) x /= qp_total;
    std::vector<std::vector<double>> q_pp(static_cast<std::size_t>(k),
                                          std::vector<double>(static_cast<std::size_t>(k)));
    for (auto& row : q_pp) {
      double row_total = 0.0;
      for (double& x : row) {
        x = -std::log(unit(rng));
        row_total += x;
      }
      for (double& x : row) x /= row_total;
    }
    const ModelParams params(gamma, alpha, 10,
                             MutationKernel(beta_prime, beta_double_prime,
                                            ProbVector(std::move(q_prime_raw)), std::move(q_pp)));

    max_gap = std::max(max_gap, generator_duality_gap(params, w_hat, f, m));
    const double applied = std::abs(fv_generator_apply(params, w_hat, f, m));
    max_bound_excess = std::max(max_bound_excess, applied - generator_bound(params, f));
  }
  report.add_value("instances", static_cast<double>(instances));
  report.add_value("max_generator_gap", max_gap);
  report.add_verdict("generator_identity", max_gap, gap_tol,
                     "max |fv - dual| over random instances");
  report.add_flag_verdict("generator_bound_holds", max_bound_excess <= 0.0,
                          "no instance exceeded the explicit bound");

  // N-sweep on a fixed degree-2 instance with frequencies kept exact.
  std::vector<double> populations = cfg.has("sweep.populations")
                                        ? cfg.get_doubles("sweep.populations")
                                        : std::vector<double>{10, 100, 1000, 10000};
  auto sweep_rng = make_rng(common.seed, Stream::kInstanceSweep, 1);
  std::vector<double> sweep_tensor(4);
  for (double& x : sweep_tensor) x = signed_unit(sweep_rng);
  const DualFunction sweep_f(2, 2, std::move(sweep_tensor));
  const FitnessVector sweep_w({0.8, 0.2});
  const std::vector<double> freq{0.3, 0.7};
  std::vector<double> moran_gaps, ext_gaps;
  for (double nd : populations) {
    const int n = static_cast<int>(nd);
    const ModelParams params(1.0, 1.0, n,
                             MutationKernel(1.0, 0.5, ProbVector({0.5, 0.5}),
                                            {{0.7, 0.3}, {0.4, 0.6}}));
    std::vector<std::int64_t> counts;
    std::int64_t assigned = 0;
    for (std::size_t a = 0; a < freq.size(); ++a) {
      const std::int64_t c = a + 1 == freq.size()
                                 ? n - assigned
                                 : static_cast<std::int64_t>(std::llround(freq[a] * n));
      counts.push_back(c);
      assigned += c;
    }
    const EmpiricalMeasure m(counts);
    const double fv = fv_generator_apply(params, sweep_w, sweep_f, m.frequencies());
    const double moran = moran_generator_apply(params, sweep_w, sweep_f, m);
    moran_gaps.push_back(std::abs(moran - fv));
    ext_gaps.push_back(extension_gap(m, sweep_f));
    report.add_value("moran_gap_N" + std::to_string(n), moran_gaps.back());
    report.add_value("extension_gap_N" + std::to_string(n), ext_gaps.back());
  }
  const double moran_slope = fit_log_slope(populations, moran_gaps);
  const double ext_slope = fit_log_slope(populations, ext_gaps);
  report.add_value("moran_gap_slope", moran_slope);
  report.add_value("extension_gap_slope", ext_slope);
  report.add_verdict("moran_gap_slope_near_minus_one", moran_slope + 1.0, 0.3,
                     "log-log slope within [-1.3, -0.7]");
  report.add_verdict("extension_gap_slope_near_minus_one", ext_slope + 1.0, 0.3,
                     "log-log slope within [-1.3, -0.7]");
  finish(report, cfg, clock);
  return report;
}

Report run_degree_chain(Config& cfg) {
  WallClock clock;
  Report report;
  report.experiment = "degree-chain";

  const CommonArgs common = parse_common(cfg);
  const ModelParams params = parse_model(cfg);
  const int k = params.num_alleles();
  const EnvironmentProcess env_proc = parse_environment(cfg, k);
  const MarkovJumpEnvironment chain = as_markov_chain(env_proc);
  const std::int64_t replicates = cfg.get_int_or("replicates", 10000);
  const int degree_cap = static_cast<int>(cfg.get_int_or("degree_cap", kDefaultDegreeCap));

  // (beta', alpha) cases for the hitting probability from degree 1.
  std::vector<double> flat = cfg.has("cases") ? cfg.get_doubles("cases")
                                              : std::vector<double>{1, 1, 3, 1, 1, 3};
  if (flat.size() % 2 != 0) throw ConfigError("cases must be (beta_prime, alpha) pairs");
  const DualFunction start = parse_function(cfg, k, "hit_f").canonicalized();
  if (start.degree() != 1) throw ConfigError("hit_f must have degree 1");

  for (std::size_t c = 0; c < flat.size(); c += 2) {
    const double beta_prime = flat[c];
    const double alpha = flat[c + 1];
    const ModelParams case_params(
        params.gamma, alpha, params.population,
        MutationKernel(beta_prime, params.kernel.beta_double_prime, params.kernel.q_prime,
                       params.kernel.q_double_prime));
    const double expected = beta_prime / (beta_prime + alpha);
    std::atomic<std::int64_t> deaths{0};
    run_replicates(replicates, common.threads, [&](std::int64_t rep) {
      auto env_rng =
          make_rng(common.seed, Stream::kEnvironment, static_cast<std::uint64_t>(rep) + c * 1000003);
      auto ev_rng =
          make_rng(common.seed, Stream::kDualEvents, static_cast<std::uint64_t>(rep) + c * 1000003);
      const DualState st = simulate_dual_until_absorbed(case_params, chain, start, env_rng,
                                                        ev_rng, degree_cap);
      for (const auto& jump : st.jump_log) {
        if (jump.degree_after != 1) {
          if (jump.degree_after == 0) deaths++;
          break;
        }
      }
      return 0.0;
    });
    const double fraction =
        static_cast<double>(deaths.load()) / static_cast<double>(replicates);
    const auto fmt = [](double x) {
      std::ostringstream os;
      os << x;
      return os.str();
    };
    const std::string label = "bp" + fmt(beta_prime) + "_a" + fmt(alpha);
    report.add_value("death_fraction_" + label, fraction);
    report.add_value("death_expected_" + label, expected);
    report.add_verdict("first_move_death_" + label, fraction - expected,
                       binomial_band(expected, static_cast<double>(replicates)),
                       "3-sigma binomial band around beta'/(beta'+alpha)");
  }

  // Absorption under the horizon-extension policy, with the configured model.
  const DualFunction f = parse_function(cfg, k).canonicalized();
  std::atomic<std::int64_t> absorbed{0};
  std::atomic<std::int64_t> violations{0};
  const std::vector<double> taus =
      collect_replicates(replicates, common.threads, [&](std::int64_t rep) {
        auto env_rng = make_rng(common.seed, Stream::kEnvironment, static_cast<std::uint64_t>(rep));
        auto ev_rng = make_rng(common.seed, Stream::kDualEvents, static_cast<std::uint64_t>(rep));
        const DualState st =
            simulate_dual_until_absorbed(params, chain, f, env_rng, ev_rng, degree_cap);
        if (st.absorbed) absorbed++;
        violations += st.sup_norm_violations;
        return st.elapsed;
      });
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  const Estimate tau = summarize(taus);
  report.add_estimate("absorption_time_mean", tau);
  report.add_value("absorption_time_median", sorted[sorted.size() / 2]);
  report.add_value("absorption_time_p99", sorted[static_cast<std::size_t>(
                                              0.99 * static_cast<double>(sorted.size() - 1))]);
  report.add_value("absorption_time_max", sorted.back());
  report.add_value("absorbed_fraction",
                   static_cast<double>(absorbed.load()) / static_cast<double>(replicates));
  report.add_flag_verdict("all_absorbed", absorbed.load() == replicates,
                          "every replicate hit a constant function");
  report.add_flag_verdict("dual_sup_norm_monotone", violations.load() == 0,
                          "no jump increased the dual sup norm");
  finish(report, cfg, clock);
  return report;
}

Report run_ergodic_limit(Config& cfg) {
  WallClock clock;
  Report report;
  report.experiment = "ergodic-limit";

  const CommonArgs common = parse_common(cfg);
  const ModelParams params = parse_model(cfg);
  const int k = params.num_alleles();
  const EnvironmentProcess env_proc = parse_environment(cfg, k);
  const MarkovJumpEnvironment chain = as_markov_chain(env_proc);
  const MarkovJumpEnvironment stationary_chain = stationary_started(chain);
  const std::int64_t dual_replicates = cfg.get_int_or("dual.replicates", 10000);
  const int degree_cap = static_cast<int>(cfg.get_int_or("degree_cap", kDefaultDegreeCap));

  // Dual-based limits of the indicator moments; independent streams per
  // allele so that the sum-to-one verdict is a genuine Monte Carlo check.
  std::vector<Estimate> limits;
  for (int a = 0; a < k; ++a) {
    const std::uint64_t seed_a =
        derive_seed(common.seed, Stream::kInstanceSweep, 1000 + static_cast<std::uint64_t>(a));
    limits.push_back(estimate_dual_limit(params, stationary_chain, DualFunction::indicator(k, a),
                                          dual_replicates, seed_a, common.threads, degree_cap));
    report.add_estimate("dual_limit_allele" + std::to_string(a), limits.back());
  }
  double sum_means = 0.0;
  double sum_var = 0.0;
  for (const auto& est : limits) {
    sum_means += est.mean;
    sum_var += est.variance / static_cast<double>(est.count);
  }
  report.add_value("dual_limit_sum", sum_means);
  report.add_verdict("indicator_limits_sum_to_one", sum_means - 1.0,
                     3.0 * std::sqrt(sum_var) + 1e-12, "sum of indicator limits vs 1");

  // Neutral case: the limit law is the mutation chain's stationary law.
  if (params.alpha == 0.0) {
    std::vector<std::vector<double>> q_mut(static_cast<std::size_t>(k),
                                           std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int x = 0; x < k; ++x) {
      double diag = 0.0;
      for (int y = 0; y < k; ++y) {
        if (x == y) continue;
        const double rate = params.kernel.beta_prime * params.kernel.q_prime[y] +
                            params.kernel.beta_double_prime *
                                params.kernel.q_double_prime[static_cast<std::size_t>(x)]
                                                            [static_cast<std::size_t>(y)];
        q_mut[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = rate;
        diag += rate;
      }
      q_mut[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] = -diag;
    }
    const ProbVector pi = stationary_of_rate_matrix(q_mut);
    for (int a = 0; a < k; ++a) {
      report.add_value("mutation_stationary_allele" + std::to_string(a), pi[a]);
      report.add_verdict("neutral_limit_allele" + std::to_string(a), limits[static_cast<std::size_t>(a)].mean - pi[a],
                         3.0 * limits[static_cast<std::size_t>(a)].standard_error() + 1e-12,
                         "dual limit vs linear-solve stationary law");
    }
  }

  // Initial-measure independence: forward runs from two point-mass initials
  // both land on the dual limit of the reference indicator.
  const std::int64_t forward_replicates = cfg.get_int_or("forward.replicates", 300);
  if (forward_replicates > 0) {
    const int forward_n = static_cast<int>(cfg.get_int_or("forward.population", 500));
    const double forward_t = cfg.get_double_or("forward.time", 30.0);
    const ModelParams forward_params(params.gamma, params.alpha, forward_n, params.kernel);
    const DualFunction f0 = DualFunction::indicator(k, 0);
    const EnvironmentProcess forward_env = stationary_chain;
    for (int which = 0; which < 2; ++which) {
      const int atom = which == 0 ? 0 : k - 1;
      std::vector<int> alleles(static_cast<std::size_t>(forward_n), atom);
      const std::uint64_t seed_fwd =
          derive_seed(common.seed, Stream::kInstanceSweep, 2000 + static_cast<std::uint64_t>(which));
      const Estimate fwd = estimate_moran_moment(forward_params, forward_env, alleles, f0,
                                                 forward_t, forward_replicates, seed_fwd,
                                                 /*quenched=*/false, common.threads);
      report.add_estimate("forward_from_allele" + std::to_string(atom), fwd);
      const double pooled = std::sqrt(fwd.variance / static_cast<double>(fwd.count) +
                                      limits[0].variance / static_cast<double>(limits[0].count));
      report.add_verdict(
          "initial_independence_allele" + std::to_string(atom), fwd.mean - limits[0].mean,
          3.0 * pooled + 1.0 / static_cast<double>(forward_n),
          "forward mean vs dual limit, band 3*pooled_se + 1/N");
    }
  }

  // Joint moment stabilization of (mu_t, e_t): informational metrics.
  const std::int64_t joint_replicates = cfg.get_int_or("joint.replicates", 150);
  if (joint_replicates > 0) {
    const int joint_n = static_cast<int>(cfg.get_int_or("joint.population", 200));
    const double t1 = cfg.get_double_or("joint.time", 20.0);
    const double t2 = 1.5 * t1;
    const ModelParams joint_params(params.gamma, params.alpha, joint_n, params.kernel);
    const DualFunction f0 = DualFunction::indicator(k, 0);
    const std::vector<double> times{t1, t2};
    std::vector<double> first(static_cast<std::size_t>(joint_replicates));
    const std::uint64_t seed_joint = derive_seed(common.seed, Stream::kInstanceSweep, 3000);
    const std::vector<double> second =
        collect_replicates(joint_replicates, common.threads, [&](std::int64_t rep) {
          auto env_rng = make_rng(seed_joint, Stream::kEnvironment, static_cast<std::uint64_t>(rep));
          auto sim_rng = make_rng(seed_joint, Stream::kMoranEvents, static_cast<std::uint64_t>(rep));
          const EnvironmentPath path = sample_path(stationary_chain, t2, env_rng);
          std::vector<int> alleles(static_cast<std::size_t>(joint_n), 0);
          const MoranTrajectory traj =
              simulate_moran(joint_params, path, ParticleState(alleles), t2, times, sim_rng);
          const double h1 = path.at(t1)[0];
          const double h2 = path.at(t2)[0];
          first[static_cast<std::size_t>(rep)] =
              product_moment(traj.measures[0].frequencies(), f0) * h1;
          return product_moment(traj.measures[1].frequencies(), f0) * h2;
        });
    const Estimate joint1 = summarize(first);
    const Estimate joint2 = summarize(second);
    report.add_estimate("joint_moment_t1", joint1);
    report.add_estimate("joint_moment_t2", joint2);
    report.add_value("joint_moment_drift", joint2.mean - joint1.mean);
  }
  finish(report, cfg, clock);
  return report;
}

void run_moran_sim(Config& cfg, std::ostream& table_out) {
  const CommonArgs common = parse_common(cfg);
  const ModelParams params = parse_model(cfg);
  const int k = params.num_alleles();
  const EnvironmentProcess env_proc = parse_environment(cfg, k);
  const double horizon = cfg.get_double("horizon");
  std::vector<double> sample_times = cfg.get_doubles("sample_times");
  const MoranInit init = parse_init(cfg, k, params.population);
  const std::string export_file = cfg.get_string_or("env.export_file", "");
  cfg.check_all_consumed();

  auto env_rng = make_rng(common.seed, Stream::kEnvironment);
  const EnvironmentPath path = sample_path(env_proc, horizon, env_rng);
  if (!export_file.empty()) {
    std::ofstream out(export_file);
    write_path(out, path);
  }
  auto sim_rng = make_rng(common.seed, Stream::kMoranEvents);
  const ParticleState state = make_initial_state(init, params, sim_rng);
  const MoranTrajectory traj =
      simulate_moran(params, path, state, horizon, sample_times, sim_rng);
  write_trajectory(table_out, traj);
}

void run_dual_sim(Config& cfg, std::ostream& table_out) {
  const CommonArgs common = parse_common(cfg);
  const ModelParams params = parse_model(cfg);
  const int k = params.num_alleles();
  const EnvironmentProcess env_proc = parse_environment(cfg, k);
  const double horizon = cfg.get_double("horizon");
  const DualFunction f = parse_function(cfg, k).canonicalized();
  const int degree_cap = static_cast<int>(cfg.get_int_or("degree_cap", kDefaultDegreeCap));
  cfg.check_all_consumed();

  auto env_rng = make_rng(common.seed, Stream::kEnvironment);
  const EnvironmentPath path = sample_path(env_proc, horizon, env_rng);
  auto ev_rng = make_rng(common.seed, Stream::kDualEvents);
  const DualState st = simulate_dual(params, path, horizon, f, ev_rng, degree_cap);
  write_jump_log(table_out, st);
}

}  // namespace fvlab
