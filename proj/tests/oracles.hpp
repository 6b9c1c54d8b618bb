#pragma once

// Brute-force oracles used by the unit and acceptance suites. Everything here
// enumerates the definitions directly and stays independent of the library's
// stride arithmetic and recursion paths.

#include <cmath>
#include <random>
#include <vector>

#include "fvlab/dual_function.hpp"
#include "fvlab/types.hpp"

namespace oracles {

using fvlab::DualFunction;

inline bool advance(std::vector<int>& point, int num_alleles) {
  for (int k = static_cast<int>(point.size()) - 1; k >= 0; --k) {
    if (++point[static_cast<std::size_t>(k)] < num_alleles) return true;
    point[static_cast<std::size_t>(k)] = 0;
  }
  return false;
}

// <m^(x)n, f> as a plain sum over all K^n tuples.
inline double product_moment(const fvlab::ProbVector& m, const DualFunction& f) {
  if (f.degree() == 0) return f.scalar();
  std::vector<int> x(static_cast<std::size_t>(f.degree()), 0);
  double total = 0.0;
  do {
    double weight = 1.0;
    for (int v : x) weight *= m[v];
    total += weight * f.at(x);
  } while (advance(x, f.num_alleles()));
  return total;
}

// <m^(N), f> as an average over ordered tuples of distinct individuals.
inline double moment_without_replacement(const std::vector<std::int64_t>& counts,
                                         const DualFunction& f) {
  std::vector<int> individuals;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    individuals.insert(individuals.end(), static_cast<std::size_t>(counts[a]),
                       static_cast<int>(a));
  }
  const int n = static_cast<int>(individuals.size());
  const int degree = f.degree();
  if (degree == 0) return f.scalar();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<int> types(static_cast<std::size_t>(degree), 0);
  double total = 0.0;
  long tuples = 0;
  auto rec = [&](auto&& self, int slot) -> void {
    if (slot == degree) {
      total += f.at(types);
      ++tuples;
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      used[static_cast<std::size_t>(i)] = true;
      types[static_cast<std::size_t>(slot)] = individuals[static_cast<std::size_t>(i)];
      self(self, slot + 1);
      used[static_cast<std::size_t>(i)] = false;
    }
  };
  rec(rec, 0);
  return total / static_cast<double>(tuples);
}

// Pointwise jump-map oracles; each builds the image tensor by evaluating the
// defining formula at every lattice point.

inline DualFunction resampling(const DualFunction& f, int i, int j) {
  const int k = f.num_alleles();
  const int m = f.degree() - 1;
  std::vector<double> out;
  std::vector<int> y(static_cast<std::size_t>(m), 0);
  std::vector<int> x(static_cast<std::size_t>(f.degree()), 0);
  do {
    for (int s = 0; s < m; ++s) x[static_cast<std::size_t>(s < j ? s : s + 1)] = y[static_cast<std::size_t>(s)];
    x[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(i)];
    out.push_back(f.at(x));
  } while (advance(y, k));
  return DualFunction(k, m, std::move(out));
}

inline DualFunction parent_indep_mutation(const DualFunction& f, int i,
                                          const fvlab::ProbVector& q) {
  const int k = f.num_alleles();
  const int m = f.degree() - 1;
  std::vector<double> out;
  std::vector<int> y(static_cast<std::size_t>(m), 0);
  std::vector<int> x(static_cast<std::size_t>(f.degree()), 0);
  do {
    for (int s = 0; s < m; ++s) x[static_cast<std::size_t>(s < i ? s : s + 1)] = y[static_cast<std::size_t>(s)];
    double acc = 0.0;
    for (int u = 0; u < k; ++u) {
      x[static_cast<std::size_t>(i)] = u;
      acc += q[u] * f.at(x);
    }
    out.push_back(acc);
  } while (advance(y, k));
  return DualFunction(k, m, std::move(out));
}

inline DualFunction parent_dep_mutation(const DualFunction& f, int i,
                                        const std::vector<std::vector<double>>& q) {
  const int k = f.num_alleles();
  std::vector<double> out;
  std::vector<int> x(static_cast<std::size_t>(f.degree()), 0);
  std::vector<int> z = x;
  do {
    z = x;
    double acc = 0.0;
    for (int u = 0; u < k; ++u) {
      z[static_cast<std::size_t>(i)] = u;
      acc += q[static_cast<std::size_t>(x[static_cast<std::size_t>(i)])][static_cast<std::size_t>(u)] * f.at(z);
    }
    out.push_back(acc);
  } while (advance(x, k));
  return DualFunction(k, f.degree(), std::move(out));
}

inline DualFunction selection(const DualFunction& f, int i, const fvlab::FitnessVector& w) {
  const int k = f.num_alleles();
  const int n = f.degree();
  std::vector<double> out;
  std::vector<int> x(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> head(static_cast<std::size_t>(n), 0);
  std::vector<int> rest(static_cast<std::size_t>(n), 0);
  do {
    for (int s = 0; s < n; ++s) {
      head[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(s)];
      rest[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(s < i ? s : s + 1)];
    }
    const double wi = w[x[static_cast<std::size_t>(i)]];
    out.push_back(wi * f.at(head) + (1.0 - wi) * f.at(rest));
  } while (advance(x, k));
  return DualFunction(k, n + 1, std::move(out));
}

// Random instances.

inline DualFunction random_tensor(int num_alleles, int degree, std::mt19937_64& rng) {
  std::size_t size = 1;
  for (int d = 0; d < degree; ++d) size *= static_cast<std::size_t>(num_alleles);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> values(size);
  for (double& v : values) v = unit(rng);
  return DualFunction(num_alleles, degree, std::move(values));
}

inline fvlab::ProbVector random_simplex(int num_alleles, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(num_alleles));
  double total = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - unit(rng));
    total += x;
  }
  for (double& x : p) x /= total;
  return fvlab::ProbVector(std::move(p));
}

inline fvlab::FitnessVector random_fitness(int num_alleles, std::mt19937_64& rng, double lo = 0.0,
                                           double hi = 1.0) {
  std::uniform_real_distribution<double> unit(lo, hi);
  std::vector<double> w(static_cast<std::size_t>(num_alleles));
  for (double& x : w) x = unit(rng);
  return fvlab::FitnessVector(std::move(w));
}

inline std::vector<std::vector<double>> random_stochastic_matrix(int num_alleles,
                                                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(num_alleles),
                                        std::vector<double>(static_cast<std::size_t>(num_alleles)));
  for (auto& row : rows) {
    double total = 0.0;
    for (double& x : row) {
      x = -std::log(1.0 - unit(rng));
      total += x;
    }
    for (double& x : row) x /= total;
  }
  return rows;
}

inline double max_abs_diff(const DualFunction& a, const DualFunction& b) {
  if (a.degree() != b.degree() || a.num_alleles() != b.num_alleles()) {
    return std::numeric_limits<double>::infinity();
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

}  // namespace oracles
