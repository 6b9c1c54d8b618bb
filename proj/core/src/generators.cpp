#include "fvlab/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "fvlab/compensated_sum.hpp"
#include "fvlab/dual.hpp"

namespace fvlab {

namespace {

void check_input(const ModelParams& params, const FitnessVector& w, const DualFunction& f,
                 int measure_alleles) {
  if (w.size() != params.num_alleles() || f.num_alleles() != params.num_alleles() ||
      measure_alleles != params.num_alleles()) {
    throw std::invalid_argument("generator apply: allele count mismatch");
  }
}

}  // namespace

double fv_generator_apply(const ModelParams& params, const FitnessVector& w_hat,
                          const DualFunction& f, const ProbVector& m) {
  check_input(params, w_hat, f, m.size());
  const int n = f.degree();
  if (n == 0) return 0.0;
  const double base = product_moment(m, f);
  CompensatedSum acc;
  // resampling: gamma/2 * sum_{i != j} <m, f o sigma_ij - f>
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      acc.add(params.gamma / 2.0 * (product_moment(m, f.merged(i, j)) - base));
    }
  }
  // mutation: beta' <m, B'_i f - f> + beta'' <m, B''_i f - f>
  for (int i = 0; i < n; ++i) {
    if (params.kernel.beta_prime > 0.0) {
      acc.add(params.kernel.beta_prime *
              (product_moment(m, f.contracted(i, params.kernel.q_prime.data())) - base));
    }
    if (params.kernel.beta_double_prime > 0.0) {
      acc.add(params.kernel.beta_double_prime *
              (product_moment(m, f.kernel_applied(i, params.kernel.q_double_prime)) - base));
    }
  }
  // selection: alpha * <m, e_i f - e_{n+1} f>, the second term via the
  // degree-(n+1) lift
  if (params.alpha > 0.0) {
    const double lifted = product_moment(m, f.lifted(w_hat.data()));
    for (int i = 0; i < n; ++i) {
      acc.add(params.alpha * (product_moment(m, f.scaled(i, w_hat.data())) - lifted));
    }
  }
  return acc.value();
}

double dual_generator_apply(const ModelParams& params, const FitnessVector& w_left,
                            const DualFunction& f, const ProbVector& m) {
  check_input(params, w_left, f, m.size());
  const int n = f.degree();
  if (n == 0) return 0.0;
  const double base = product_moment(m, f);
  CompensatedSum acc;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      acc.add(params.gamma / 2.0 * (product_moment(m, apply_resampling(f, i, j)) - base));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (params.kernel.beta_prime > 0.0) {
      acc.add(params.kernel.beta_prime *
              (product_moment(m, apply_parent_indep_mutation(f, i, params.kernel.q_prime)) - base));
    }
    if (params.kernel.beta_double_prime > 0.0) {
      acc.add(params.kernel.beta_double_prime *
              (product_moment(m, apply_parent_dep_mutation(f, i, params.kernel.q_double_prime)) -
               base));
    }
  }
  if (params.alpha > 0.0) {
    for (int i = 0; i < n; ++i) {
      acc.add(params.alpha * (product_moment(m, apply_selection(f, i, w_left)) - base));
    }
  }
  return acc.value();
}

double moran_generator_apply(const ModelParams& params, const FitnessVector& w_hat,
                             const DualFunction& f, const EmpiricalMeasure& m) {
  check_input(params, w_hat, f, m.num_alleles());
  const int n = f.degree();
  const std::int64_t big_n = m.total();
  if (n > big_n) {
    throw DegreeExceedsPopulation("moran_generator_apply: degree exceeds population");
  }
  if (n == 0) return 0.0;
  const double base = moment_without_replacement(m, f);
  CompensatedSum acc;

  // Lifting f to N slots, only pairs inside the first n slots contribute to
  // the resampling sum; pairs touching a dummy slot reduce to transpositions
  // or leave f unchanged, and their brackets vanish by exchangeability.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      acc.add(params.gamma / 2.0 * (moment_without_replacement(m, f.merged(i, j)) - base));
    }
  }

  for (int i = 0; i < n; ++i) {
    if (params.kernel.beta_prime > 0.0) {
      acc.add(params.kernel.beta_prime *
              (moment_without_replacement(m, f.contracted(i, params.kernel.q_prime.data())) -
               base));
    }
    if (params.kernel.beta_double_prime > 0.0) {
      acc.add(params.kernel.beta_double_prime *
              (moment_without_replacement(m, f.kernel_applied(i, params.kernel.q_double_prime)) -
               base));
    }
  }

  if (params.alpha > 0.0) {
    const double inv_n = 1.0 / static_cast<double>(big_n);
    // pairs inside the first n slots
    for (int i = 0; i < n; ++i) {
      const double scaled_base = moment_without_replacement(m, f.scaled(i, w_hat.data()));
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        // e_i (f o sigma_ij): after deleting slot j the factor w(x_i) scales
        // the merged slot, which sits at i when i < j and i-1 otherwise.
        const int merged_slot = i < j ? i : i - 1;
        const DualFunction merged_scaled = f.merged(i, j).scaled(merged_slot, w_hat.data());
        acc.add(params.alpha * inv_n *
                (moment_without_replacement(m, merged_scaled) - scaled_base));
      }
    }
    // pairs (i > n, j <= n): the reproducing slot is a dummy, leaving
    // (N - n) identical brackets per target slot j.
    if (big_n > n) {
      const double mult = params.alpha * inv_n * static_cast<double>(big_n - n);
      const double lifted = moment_without_replacement(m, f.lifted(w_hat.data()));
      for (int j = 0; j < n; ++j) {
        acc.add(mult * (moment_without_replacement(m, f.scaled(j, w_hat.data())) - lifted));
      }
    }
  }
  return acc.value();
}

double generator_duality_gap(const ModelParams& params, const FitnessVector& w_hat,
                             const DualFunction& f, const ProbVector& m) {
  return std::abs(fv_generator_apply(params, w_hat, f, m) -
                  dual_generator_apply(params, w_hat, f, m));
}

double generator_bound(const ModelParams& params, const DualFunction& f) {
  const double n = static_cast<double>(f.degree());
  const double norm = f.sup_norm();
  const double pairs = n * (n - 1.0) / 2.0;
  return params.gamma * pairs * norm + 4.0 * params.kernel.beta() * n * norm +
         2.0 * n * params.alpha * norm;
}

}  // namespace fvlab
