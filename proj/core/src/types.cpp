#include "fvlab/types.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fvlab/compensated_sum.hpp"

namespace fvlab {

TypeSpace::TypeSpace(int num_alleles_in) : num_alleles(num_alleles_in) {
  if (num_alleles < 2) throw std::invalid_argument("TypeSpace: need at least two alleles");
}

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw std::invalid_argument("ProbVector: empty");
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0)) throw std::invalid_argument("ProbVector: negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw std::invalid_argument("ProbVector: entries sum to " + std::to_string(sum));
  }
}

FitnessVector::FitnessVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw std::invalid_argument("FitnessVector: empty");
  for (double x : w_) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("FitnessVector: entry outside [0,1]");
    }
  }
}

MutationKernel::MutationKernel(double beta_prime_in, double beta_double_prime_in,
                               ProbVector q_prime_in,
                               std::vector<std::vector<double>> q_double_prime_in)
    : beta_prime(beta_prime_in),
      beta_double_prime(beta_double_prime_in),
      q_prime(std::move(q_prime_in)),
      q_double_prime(std::move(q_double_prime_in)) {
  if (beta_prime < 0.0 || beta_double_prime < 0.0) {
    throw std::invalid_argument("MutationKernel: negative rate");
  }
  if (beta_prime + beta_double_prime <= 0.0) {
    throw std::invalid_argument("MutationKernel: total mutation rate must be positive");
  }
  const std::size_t k = static_cast<std::size_t>(q_prime.size());
  if (q_double_prime.size() != k) {
    throw std::invalid_argument("MutationKernel: parent-dependent kernel has wrong row count");
  }
  for (const auto& row : q_double_prime) {
    if (row.size() != k) throw std::invalid_argument("MutationKernel: kernel row length mismatch");
    double sum = 0.0;
    for (double x : row) {
      if (!(x >= 0.0)) throw std::invalid_argument("MutationKernel: negative kernel entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
      throw std::invalid_argument("MutationKernel: kernel row sums to " + std::to_string(sum));
    }
  }
}

MutationKernel MutationKernel::parent_independent(double beta_prime, ProbVector q_prime) {
  const int k = q_prime.size();
  std::vector<std::vector<double>> identity(static_cast<std::size_t>(k),
                                            std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int a = 0; a < k; ++a) identity[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = 1.0;
  return MutationKernel(beta_prime, 0.0, std::move(q_prime), std::move(identity));
}

ModelParams::ModelParams(double gamma_in, double alpha_in, int population_in,
                         MutationKernel kernel_in)
    : gamma(gamma_in), alpha(alpha_in), population(population_in), kernel(std::move(kernel_in)) {
  if (!(gamma > 0.0)) throw std::invalid_argument("ModelParams: gamma must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("ModelParams: alpha must be nonnegative");
  if (population < 2) throw std::invalid_argument("ModelParams: population must be at least 2");
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)), total_(0) {
  if (counts_.empty()) throw std::invalid_argument("EmpiricalMeasure: empty");
  for (std::int64_t c : counts_) {
    if (c < 0) throw std::invalid_argument("EmpiricalMeasure: negative count");
    total_ += c;
  }
  if (total_ <= 0) throw std::invalid_argument("EmpiricalMeasure: total count must be positive");
}

ProbVector EmpiricalMeasure::frequencies() const {
  std::vector<double> p(counts_.size());
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    p[a] = static_cast<double>(counts_[a]) / static_cast<double>(total_);
  }
  return ProbVector(std::move(p));
}

double product_moment(const ProbVector& m, const DualFunction& f) {
  if (m.size() != f.num_alleles()) {
    throw std::invalid_argument("product_moment: allele count mismatch");
  }
  if (f.degree() == 0) return f.scalar();
  // Contract the last index repeatedly.
  std::vector<double> cur = f.values();
  const std::size_t k = static_cast<std::size_t>(m.size());
  for (int d = f.degree(); d > 0; --d) {
    std::vector<double> red(cur.size() / k);
    for (std::size_t off = 0; off < red.size(); ++off) {
      CompensatedSum acc;
      for (std::size_t a = 0; a < k; ++a) acc.add(cur[off * k + a] * m[static_cast<int>(a)]);
      red[off] = acc.value();
    }
    cur = std::move(red);
  }
  return cur[0];
}

namespace {

double without_replacement_rec(const DualFunction& f, std::vector<std::int64_t>& remaining,
                               std::int64_t left, std::vector<int>& point, int slot) {
  if (slot == f.degree()) return f.at(point);
  CompensatedSum acc;
  for (int a = 0; a < f.num_alleles(); ++a) {
    const std::int64_t c = remaining[static_cast<std::size_t>(a)];
    if (c == 0) continue;
    point[static_cast<std::size_t>(slot)] = a;
    remaining[static_cast<std::size_t>(a)] = c - 1;
    const double w = static_cast<double>(c) / static_cast<double>(left);
    acc.add(w * without_replacement_rec(f, remaining, left - 1, point, slot + 1));
    remaining[static_cast<std::size_t>(a)] = c;
  }
  return acc.value();
}

}  // namespace

double moment_without_replacement(const EmpiricalMeasure& m, const DualFunction& f) {
  if (m.num_alleles() != f.num_alleles()) {
    throw std::invalid_argument("moment_without_replacement: allele count mismatch");
  }
  if (f.degree() > m.total()) {
    throw DegreeExceedsPopulation("moment_without_replacement: degree " +
                                  std::to_string(f.degree()) + " exceeds population " +
                                  std::to_string(m.total()));
  }
  if (f.degree() == 0) return f.scalar();
  std::vector<std::int64_t> remaining = m.counts();
  std::vector<int> point(static_cast<std::size_t>(f.degree()), 0);
  return without_replacement_rec(f, remaining, m.total(), point, 0);
}

double extension_gap(const EmpiricalMeasure& m, const DualFunction& f) {
  return std::abs(moment_without_replacement(m, f) - product_moment(m.frequencies(), f));
}

}  // namespace fvlab
