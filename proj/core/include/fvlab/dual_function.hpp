#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fvlab {

// A real-valued test function on ordered allele tuples, stored as a dense
// row-major tensor over {0,...,K-1}^degree. Degree 0 is a single scalar.
//
// Canonical form: no index along which all K slices coincide (within
// kCanonicalRelTol relative to max(1, sup norm)). The degree of a canonical
// function is the number of variables it genuinely depends on, which is what
// makes absorption of the dual process a structural property (degree 0).
class DualFunction {
 public:
  static constexpr double kCanonicalRelTol = 1e-12;

  DualFunction(int num_alleles, int degree, std::vector<double> values);

  static DualFunction constant(int num_alleles, double value);
  // Indicator of one allele, degree 1.
  static DualFunction indicator(int num_alleles, int allele);

  int num_alleles() const { return num_alleles_; }
  int degree() const { return degree_; }
  bool is_constant() const { return degree_ == 0; }
  // Value of a degree-0 function.
  double scalar() const;

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // point must have exactly degree() entries, each in [0, K).
  double at(std::span<const int> point) const;
  double sup_norm() const;

  // Repeatedly drops indices whose slices coincide within the tolerance.
  DualFunction canonicalized(double rel_tol = kCanonicalRelTol) const;

  // g(y) = f(y with the variable of slot j identified with slot i); slot j
  // is removed, degree drops by one. Indices are 0-based, i != j.
  DualFunction merged(int i, int j) const;

  // g = sum_u f(..., u at slot i, ...) * weights[u]; slot i removed.
  DualFunction contracted(int i, std::span<const double> weights) const;

  // g(..., x_i, ...) = sum_u rows[x_i][u] * f(..., u, ...); degree kept.
  DualFunction kernel_applied(int i, const std::vector<std::vector<double>>& rows) const;

  // g(x) = weights[x_i] * f(x).
  DualFunction scaled(int i, std::span<const double> weights) const;

  // g(x_0,...,x_n) = f(x_0,...,x_{n-1}) * weights[x_n]; degree + 1.
  DualFunction lifted(std::span<const double> weights) const;

  bool operator==(const DualFunction& other) const = default;

 private:
  int num_alleles_;
  int degree_;
  std::vector<double> values_;
};

}  // namespace fvlab
