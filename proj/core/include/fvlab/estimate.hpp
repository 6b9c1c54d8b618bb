#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace fvlab {

struct Estimate {
  double mean = 0.0;
  double variance = 0.0;  // sample variance
  std::int64_t count = 0;
  double ci99_half_width = 0.0;  // 2.576 * sqrt(variance / count)

  double standard_error() const;
};

Estimate summarize(std::span<const double> values);

// Runs worker(0..count-1), each call independent, and summarizes the results.
// Replicates are stored by index and reduced sequentially, so the outcome is
// identical for every thread count. Worker exceptions are rethrown.
Estimate run_replicates(std::int64_t count, int threads,
                        const std::function<double(std::int64_t)>& worker);

// Same scheduling, but keeps the per-replicate values.
std::vector<double> collect_replicates(std::int64_t count, int threads,
                                       const std::function<double(std::int64_t)>& worker);

int resolve_threads(int threads);

}  // namespace fvlab
