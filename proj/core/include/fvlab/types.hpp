#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fvlab/dual_function.hpp"

namespace fvlab {

// Raised when a moment without replacement is requested for a test function
// whose degree exceeds the population size.
struct DegreeExceedsPopulation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

constexpr double kSimplexTol = 1e-12;

// Finite allele space {0,...,K-1}.
struct TypeSpace {
  explicit TypeSpace(int num_alleles);
  int num_alleles;
};

// Probability vector over alleles (nonnegative, sums to 1 within kSimplexTol).
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> p);

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int a) const { return p_[static_cast<std::size_t>(a)]; }
  const std::vector<double>& data() const { return p_; }

 private:
  std::vector<double> p_;
};

// One fitness value per allele, each in [0, 1].
class FitnessVector {
 public:
  explicit FitnessVector(std::vector<double> w);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int a) const { return w_[static_cast<std::size_t>(a)]; }
  const std::vector<double>& data() const { return w_; }

  bool operator==(const FitnessVector& other) const = default;

 private:
  std::vector<double> w_;
};

// Mutation decomposition beta*q(x,dy) = beta' q'(dy) + beta'' q''(x,dy).
struct MutationKernel {
  MutationKernel(double beta_prime_in, double beta_double_prime_in, ProbVector q_prime_in,
                 std::vector<std::vector<double>> q_double_prime_in);

  // Kernel with only the parent-independent component.
  static MutationKernel parent_independent(double beta_prime, ProbVector q_prime);

  double beta() const { return beta_prime + beta_double_prime; }
  int num_alleles() const { return q_prime.size(); }

  double beta_prime;
  double beta_double_prime;
  ProbVector q_prime;
  std::vector<std::vector<double>> q_double_prime;  // row-stochastic K x K
};

struct ModelParams {
  ModelParams(double gamma_in, double alpha_in, int population_in, MutationKernel kernel_in);

  int num_alleles() const { return kernel.num_alleles(); }

  double gamma;      // resampling rate per ordered pair is gamma/2
  double alpha;      // candidate selection rate per ordered pair is alpha/N
  int population;    // N, Moran only
  MutationKernel kernel;
};

// Allele counts of N individuals; m(a) = counts[a]/N.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<std::int64_t> counts);

  int num_alleles() const { return static_cast<int>(counts_.size()); }
  std::int64_t total() const { return total_; }
  std::int64_t count(int a) const { return counts_[static_cast<std::size_t>(a)]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  ProbVector frequencies() const;

  bool operator==(const EmpiricalMeasure& other) const = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_;
};

// <m^(x)n, f>: full contraction of f against the n-fold product of m.
double product_moment(const ProbVector& m, const DualFunction& f);

// <m^(N), f>: expectation of f over an ordered sample of degree(f) distinct
// individuals, computed by recursion over remaining allele counts (cost is
// polynomial in K^n, independent of N).
double moment_without_replacement(const EmpiricalMeasure& m, const DualFunction& f);

// |<m^(N), f> - <(m/N)^(x)n, f>|, the with/without-replacement gap.
double extension_gap(const EmpiricalMeasure& m, const DualFunction& f);

}  // namespace fvlab
