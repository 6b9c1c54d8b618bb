#pragma once

#include <cmath>

namespace fvlab {

// Neumaier-compensated accumulator. Generator identities are checked to
// 1e-10 absolute, so bracket sums are accumulated in compensated form.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace fvlab
