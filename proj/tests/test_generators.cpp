#include <doctest.h>

#include <cmath>

#include "fvlab/generators.hpp"
#include "fvlab/moran.hpp"
#include "fvlab/rng.hpp"
#include "oracles.hpp"

using namespace fvlab;

namespace {

ModelParams random_params(std::mt19937_64& rng, int num_alleles, int population = 10) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double gamma = 0.1 + 1.9 * unit(rng);
  const double alpha = 2.0 * unit(rng);
  const double beta_prime = 0.1 + 1.9 * unit(rng);
  const double beta_double_prime = 2.0 * unit(rng);
  return ModelParams(gamma, alpha, population,
                     MutationKernel(beta_prime, beta_double_prime,
                                    oracles::random_simplex(num_alleles, rng),
                                    oracles::random_stochastic_matrix(num_alleles, rng)));
}

// The diffusion generator expanded bracket by bracket as plain lattice sums.
double oracle_fv_apply(const ModelParams& params, const FitnessVector& w, const DualFunction& f,
                       const ProbVector& m) {
  const int n = f.degree();
  if (n == 0) return 0.0;
  const double base = oracles::product_moment(m, f);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      total += params.gamma / 2.0 * (oracles::product_moment(m, oracles::resampling(f, i, j)) - base);
    }
  }
  for (int i = 0; i < n; ++i) {
    total += params.kernel.beta_prime *
             (oracles::product_moment(m, oracles::parent_indep_mutation(f, i, params.kernel.q_prime)) -
              base);
    total += params.kernel.beta_double_prime *
             (oracles::product_moment(m, oracles::parent_dep_mutation(f, i, params.kernel.q_double_prime)) -
              base);
  }
  // selection: alpha * sum_i <m^(x)(n+1), (w(x_i) - w(x_{n+1})) f(x_1..x_n)>
  for (int i = 0; i < n; ++i) {
    std::vector<int> x(static_cast<std::size_t>(n + 1), 0);
    std::vector<int> head(static_cast<std::size_t>(n), 0);
    double term = 0.0;
    do {
      for (int s = 0; s < n; ++s) head[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(s)];
      double weight = 1.0;
      for (int v : x) weight *= m[v];
      term += weight * (w[x[static_cast<std::size_t>(i)]] - w[x[static_cast<std::size_t>(n)]]) * f.at(head);
    } while (oracles::advance(x, f.num_alleles()));
    total += params.alpha * term;
  }
  return total;
}

}  // namespace

TEST_CASE("generators vanish on constants and under neutral fitness") {
  std::mt19937_64 rng(41);
  const ModelParams params = random_params(rng, 2);
  const ProbVector m = oracles::random_simplex(2, rng);
  const FitnessVector w = oracles::random_fitness(2, rng);
  CHECK(fv_generator_apply(params, w, DualFunction::constant(2, 3.0), m) == 0.0);
  CHECK(dual_generator_apply(params, w, DualFunction::constant(2, 3.0), m) == 0.0);
  CHECK(moran_generator_apply(params, w, DualFunction::constant(2, 3.0), EmpiricalMeasure({4, 6})) ==
        0.0);

  // constant fitness: the selection term cancels
  const DualFunction f = oracles::random_tensor(2, 2, rng);
  const ModelParams no_sel(params.gamma, 0.0, params.population, params.kernel);
  const FitnessVector flat({0.6, 0.6});
  CHECK(fv_generator_apply(params, flat, f, m) ==
        doctest::Approx(fv_generator_apply(no_sel, flat, f, m)).epsilon(1e-12));
}

TEST_CASE("diffusion generator matches the bracket-by-bracket oracle") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 25; ++rep) {
    const int k = 2 + static_cast<int>(rng() % 2);
    const int n = static_cast<int>(rng() % 4);
    const ModelParams params = random_params(rng, k);
    const DualFunction f = oracles::random_tensor(k, n, rng);
    const ProbVector m = oracles::random_simplex(k, rng);
    const FitnessVector w = oracles::random_fitness(k, rng);
    CHECK(fv_generator_apply(params, w, f, m) ==
          doctest::Approx(oracle_fv_apply(params, w, f, m)).epsilon(1e-11));
  }
}

TEST_CASE("generator identity: the dual route equals the forward route") {
  std::mt19937_64 rng(47);
  double max_gap = 0.0;
  for (int rep = 0; rep < 60; ++rep) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const int n = static_cast<int>(rng() % 5);
    const ModelParams params = random_params(rng, k);
    const DualFunction f = oracles::random_tensor(k, n, rng);
    const ProbVector m = oracles::random_simplex(k, rng);
    const FitnessVector w = oracles::random_fitness(k, rng);
    max_gap = std::max(max_gap, generator_duality_gap(params, w, f, m));

    // with alpha = 0 the identity reduces to the exchangeability of the
    // resampling brackets on product measures
    const ModelParams no_sel(params.gamma, 0.0, params.population, params.kernel);
    CHECK(generator_duality_gap(no_sel, w, f, m) <= 1e-11);
  }
  CHECK(max_gap <= 1e-10);
}

TEST_CASE("generator application is linear in the test function") {
  std::mt19937_64 rng(53);
  const ModelParams params = random_params(rng, 3);
  const ProbVector m = oracles::random_simplex(3, rng);
  const FitnessVector w = oracles::random_fitness(3, rng);
  const DualFunction f = oracles::random_tensor(3, 2, rng);
  const DualFunction g = oracles::random_tensor(3, 2, rng);
  const double a = 1.7, b = -0.4;
  std::vector<double> combo(f.values().size());
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * f.values()[i] + b * g.values()[i];
  const DualFunction fg(3, 2, combo);
  CHECK(fv_generator_apply(params, w, fg, m) ==
        doctest::Approx(a * fv_generator_apply(params, w, f, m) +
                        b * fv_generator_apply(params, w, g, m))
            .epsilon(1e-12));
}

TEST_CASE("finite-population generator at the concentrated atom") {
  // N = n = 2, everything on allele 0, neutral fitness: only mutation moves
  const int k = 2;
  const ModelParams params(1.3, 0.8, 2,
                           MutationKernel(0.9, 0.7, ProbVector({0.25, 0.75}),
                                          {{0.6, 0.4}, {0.1, 0.9}}));
  const FitnessVector flat({0.5, 0.5});
  std::mt19937_64 rng(59);
  const DualFunction f = oracles::random_tensor(k, 2, rng);
  const EmpiricalMeasure m({2, 0});

  const int p00[] = {0, 0};
  double by_hand = 0.0;
  for (int i = 0; i < 2; ++i) {
    double bp_term = 0.0, bpp_term = 0.0;
    for (int u = 0; u < k; ++u) {
      const int point[2] = {i == 0 ? u : 0, i == 0 ? 0 : u};
      bp_term += params.kernel.q_prime[u] * f.at(point);
      bpp_term += params.kernel.q_double_prime[0][static_cast<std::size_t>(u)] * f.at(point);
    }
    by_hand += params.kernel.beta_prime * (bp_term - f.at(p00));
    by_hand += params.kernel.beta_double_prime * (bpp_term - f.at(p00));
  }
  CHECK(moran_generator_apply(params, flat, f, m) == doctest::Approx(by_hand).epsilon(1e-12));
}

TEST_CASE("finite-population generator converges to the diffusion generator") {
  std::mt19937_64 rng(61);
  const DualFunction f = oracles::random_tensor(2, 2, rng);
  const FitnessVector w({0.8, 0.2});
  std::vector<double> gaps;
  for (std::int64_t n : {10, 1000}) {
    const ModelParams params(1.0, 1.0, static_cast<int>(n),
                             MutationKernel(1.0, 0.5, ProbVector({0.5, 0.5}),
                                            {{0.7, 0.3}, {0.4, 0.6}}));
    const EmpiricalMeasure m({3 * n / 10, 7 * n / 10});
    gaps.push_back(std::abs(moran_generator_apply(params, w, f, m) -
                            fv_generator_apply(params, w, f, m.frequencies())));
  }
  CHECK(gaps[1] < gaps[0] / 50.0);
}

TEST_CASE("explicit generator bound holds over random measures and fitness") {
  std::mt19937_64 rng(67);
  const ModelParams params(1.0, 1.0, 10,
                           MutationKernel(1.0, 1.0, ProbVector({0.2, 0.3, 0.5}),
                                          oracles::random_stochastic_matrix(3, rng)));
  const DualFunction f = oracles::random_tensor(3, 3, rng);
  // gamma*C(3,2) + 4*beta*3 + 2*3*alpha = 3 + 24 + 6 at unit rates, beta = 2
  const double bound = generator_bound(params, f);
  CHECK(bound == doctest::Approx((3.0 + 24.0 + 6.0) * f.sup_norm()));
  for (int rep = 0; rep < 1000; ++rep) {
    const ProbVector m = oracles::random_simplex(3, rng);
    const FitnessVector w = oracles::random_fitness(3, rng);
    CHECK(std::abs(fv_generator_apply(params, w, f, m)) <= bound);
  }
  CHECK(generator_bound(params, DualFunction::constant(3, 9.0)) == 0.0);
  const double d1 = generator_bound(params, DualFunction::indicator(3, 0));
  CHECK(d1 == doctest::Approx(4.0 * params.kernel.beta() + 2.0 * params.alpha));
}

TEST_CASE("short-time Moran increments match the generator") {
  const int population = 100;
  const ModelParams params(1.0, 1.0, population,
                           MutationKernel::parent_independent(1.0, ProbVector({0.5, 0.5})));
  const FitnessVector w({0.7, 0.2});
  const DualFunction f = DualFunction::indicator(2, 0);
  const EmpiricalMeasure m0({50, 50});
  const double t = 0.1;

  std::vector<int> init(100);
  for (int i = 50; i < 100; ++i) init[static_cast<std::size_t>(i)] = 1;
  const Estimate moved = estimate_moran_moment(params, w, init, f, t, 20000, 31337,
                                               /*quenched=*/true, /*threads=*/0);
  const double slope = (moved.mean - product_moment(m0.frequencies(), f)) / t;
  const double generator = moran_generator_apply(params, w, f, m0);
  // second-order error along the flow is O(t); the constant here is generous
  CHECK(std::abs(slope - generator) <= 3.0 * moved.standard_error() / t + 2.0 * t);
}
