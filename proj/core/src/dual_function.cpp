#include "fvlab/dual_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fvlab {

namespace {

std::size_t pow_size(int base, int exp) {
  std::size_t r = 1;
  for (int k = 0; k < exp; ++k) r *= static_cast<std::size_t>(base);
  return r;
}

// Advances a multi-index in row-major order; returns false after the last one.
bool next_point(std::span<int> point, int num_alleles) {
  for (int k = static_cast<int>(point.size()) - 1; k >= 0; --k) {
    if (++point[k] < num_alleles) return true;
    point[k] = 0;
  }
  return false;
}

}  // namespace

DualFunction::DualFunction(int num_alleles, int degree, std::vector<double> values)
    : num_alleles_(num_alleles), degree_(degree), values_(std::move(values)) {
  if (num_alleles_ < 2) throw std::invalid_argument("DualFunction: need at least two alleles");
  if (degree_ < 0) throw std::invalid_argument("DualFunction: negative degree");
  if (values_.size() != pow_size(num_alleles_, degree_)) {
    throw std::invalid_argument("DualFunction: tensor size does not match K^degree");
  }
}

DualFunction DualFunction::constant(int num_alleles, double value) {
  return DualFunction(num_alleles, 0, {value});
}

DualFunction DualFunction::indicator(int num_alleles, int allele) {
  if (allele < 0 || allele >= num_alleles) {
    throw std::invalid_argument("DualFunction::indicator: allele out of range");
  }
  std::vector<double> v(static_cast<std::size_t>(num_alleles), 0.0);
  v[static_cast<std::size_t>(allele)] = 1.0;
  return DualFunction(num_alleles, 1, std::move(v));
}

double DualFunction::scalar() const {
  if (degree_ != 0) throw std::logic_error("DualFunction::scalar: degree is not 0");
  return values_[0];
}

double DualFunction::at(std::span<const int> point) const {
  if (static_cast<int>(point.size()) != degree_) {
    throw std::invalid_argument("DualFunction::at: point arity mismatch");
  }
  std::size_t off = 0;
  for (int k = 0; k < degree_; ++k) {
    if (point[k] < 0 || point[k] >= num_alleles_) {
      throw std::invalid_argument("DualFunction::at: allele out of range");
    }
    off = off * static_cast<std::size_t>(num_alleles_) + static_cast<std::size_t>(point[k]);
  }
  return values_[off];
}

double DualFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

DualFunction DualFunction::canonicalized(double rel_tol) const {
  DualFunction f = *this;
  bool changed = true;
  while (changed && f.degree_ > 0) {
    changed = false;
    const double tol = rel_tol * std::max(1.0, f.sup_norm());
    const int n = f.degree_;
    const std::size_t k = static_cast<std::size_t>(f.num_alleles_);
    for (int i = 0; i < n && !changed; ++i) {
      // strides: index i varies with period stride_i inside blocks of size block_i
      const std::size_t stride = pow_size(f.num_alleles_, n - 1 - i);
      const std::size_t block = stride * k;
      bool removable = true;
      for (std::size_t base = 0; base < f.values_.size() && removable; base += block) {
        for (std::size_t rest = 0; rest < stride && removable; ++rest) {
          const double ref = f.values_[base + rest];
          for (std::size_t u = 1; u < k; ++u) {
            if (std::abs(f.values_[base + u * stride + rest] - ref) > tol) {
              removable = false;
              break;
            }
          }
        }
      }
      if (removable) {
        std::vector<double> reduced(f.values_.size() / k);
        std::size_t w = 0;
        for (std::size_t base = 0; base < f.values_.size(); base += block) {
          for (std::size_t rest = 0; rest < stride; ++rest) {
            reduced[w++] = f.values_[base + rest];  // slice u = 0
          }
        }
        f = DualFunction(f.num_alleles_, n - 1, std::move(reduced));
        changed = true;
      }
    }
  }
  return f;
}

DualFunction DualFunction::merged(int i, int j) const {
  if (degree_ < 2) throw std::invalid_argument("merged: degree must be at least 2");
  if (i == j) throw std::invalid_argument("merged: i == j");
  if (i < 0 || i >= degree_ || j < 0 || j >= degree_) {
    throw std::invalid_argument("merged: index out of range");
  }
  const int m = degree_ - 1;
  std::vector<double> out(pow_size(num_alleles_, m));
  std::vector<int> y(static_cast<std::size_t>(m), 0);
  std::vector<int> x(static_cast<std::size_t>(degree_), 0);
  std::size_t w = 0;
  do {
    for (int s = 0; s < m; ++s) x[s < j ? s : s + 1] = y[static_cast<std::size_t>(s)];
    x[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(i)];
    out[w++] = at(x);
  } while (next_point(y, num_alleles_));
  return DualFunction(num_alleles_, m, std::move(out));
}

DualFunction DualFunction::contracted(int i, std::span<const double> weights) const {
  if (degree_ < 1) throw std::invalid_argument("contracted: degree must be at least 1");
  if (i < 0 || i >= degree_) throw std::invalid_argument("contracted: index out of range");
  if (static_cast<int>(weights.size()) != num_alleles_) {
    throw std::invalid_argument("contracted: weight length mismatch");
  }
  const std::size_t k = static_cast<std::size_t>(num_alleles_);
  const std::size_t stride = pow_size(num_alleles_, degree_ - 1 - i);
  const std::size_t block = stride * k;
  std::vector<double> out(values_.size() / k);
  std::size_t w = 0;
  for (std::size_t base = 0; base < values_.size(); base += block) {
    for (std::size_t rest = 0; rest < stride; ++rest) {
      double acc = 0.0;
      for (std::size_t u = 0; u < k; ++u) {
        acc += values_[base + u * stride + rest] * weights[u];
      }
      out[w++] = acc;
    }
  }
  return DualFunction(num_alleles_, degree_ - 1, std::move(out));
}

DualFunction DualFunction::kernel_applied(int i, const std::vector<std::vector<double>>& rows) const {
  if (degree_ < 1) throw std::invalid_argument("kernel_applied: degree must be at least 1");
  if (i < 0 || i >= degree_) throw std::invalid_argument("kernel_applied: index out of range");
  if (static_cast<int>(rows.size()) != num_alleles_) {
    throw std::invalid_argument("kernel_applied: row count mismatch");
  }
  const std::size_t k = static_cast<std::size_t>(num_alleles_);
  const std::size_t stride = pow_size(num_alleles_, degree_ - 1 - i);
  const std::size_t block = stride * k;
  std::vector<double> out(values_.size());
  for (std::size_t base = 0; base < values_.size(); base += block) {
    for (std::size_t rest = 0; rest < stride; ++rest) {
      for (std::size_t a = 0; a < k; ++a) {
        if (rows[a].size() != k) throw std::invalid_argument("kernel_applied: ragged matrix");
        double acc = 0.0;
        for (std::size_t u = 0; u < k; ++u) {
          acc += rows[a][u] * values_[base + u * stride + rest];
        }
        out[base + a * stride + rest] = acc;
      }
    }
  }
  return DualFunction(num_alleles_, degree_, std::move(out));
}

DualFunction DualFunction::scaled(int i, std::span<const double> weights) const {
  if (degree_ < 1) throw std::invalid_argument("scaled: degree must be at least 1");
  if (i < 0 || i >= degree_) throw std::invalid_argument("scaled: index out of range");
  if (static_cast<int>(weights.size()) != num_alleles_) {
    throw std::invalid_argument("scaled: weight length mismatch");
  }
  const std::size_t k = static_cast<std::size_t>(num_alleles_);
  const std::size_t stride = pow_size(num_alleles_, degree_ - 1 - i);
  const std::size_t block = stride * k;
  std::vector<double> out(values_.size());
  for (std::size_t base = 0; base < values_.size(); base += block) {
    for (std::size_t rest = 0; rest < stride; ++rest) {
      for (std::size_t u = 0; u < k; ++u) {
        out[base + u * stride + rest] = values_[base + u * stride + rest] * weights[u];
      }
    }
  }
  return DualFunction(num_alleles_, degree_, std::move(out));
}

DualFunction DualFunction::lifted(std::span<const double> weights) const {
  if (static_cast<int>(weights.size()) != num_alleles_) {
    throw std::invalid_argument("lifted: weight length mismatch");
  }
  const std::size_t k = static_cast<std::size_t>(num_alleles_);
  std::vector<double> out(values_.size() * k);
  for (std::size_t off = 0; off < values_.size(); ++off) {
    for (std::size_t a = 0; a < k; ++a) {
      out[off * k + a] = values_[off] * weights[a];
    }
  }
  return DualFunction(num_alleles_, degree_ + 1, std::move(out));
}

}  // namespace fvlab
