#pragma once

#include "fvlab/types.hpp"

namespace fvlab {

// Exact application of the three generators to the polynomial <m^(x)n, f>.
// Every bracket is a tensor contraction accumulated in compensated form; no
// randomness is involved anywhere in this module.

// Measure-valued diffusion generator at fitness w_hat, evaluated on the
// product measure of m: resampling + mutation + selection terms.
double fv_generator_apply(const ModelParams& params, const FitnessVector& w_hat,
                          const DualFunction& f, const ProbVector& m);

// Generator of the backward jump process evaluated on the same polynomial,
// assembled from the four jump maps; w_left is the left-limit environment
// value the jump rules read.
double dual_generator_apply(const ModelParams& params, const FitnessVector& w_left,
                            const DualFunction& f, const ProbVector& m);

// Finite-population generator on the sampling measure without replacement,
// with f lifted to N variables by appending dummy slots. Exchangeability
// collapses the N^2 pair sums to O(n^2) distinct brackets with closed-form
// multiplicities, so the cost does not depend on N.
double moran_generator_apply(const ModelParams& params, const FitnessVector& w_hat,
                             const DualFunction& f, const EmpiricalMeasure& m);

// |fv_generator_apply - dual_generator_apply| on identical inputs; the two
// routes agree to 1e-10 on every tested instance.
double generator_duality_gap(const ModelParams& params, const FitnessVector& w_hat,
                             const DualFunction& f, const ProbVector& m);

// Explicit uniform bound gamma*C(n,2)*||f|| + 4*beta*n*||f|| + 2*n*alpha*||f||.
double generator_bound(const ModelParams& params, const DualFunction& f);

}  // namespace fvlab
