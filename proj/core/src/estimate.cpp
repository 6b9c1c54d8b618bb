#include "fvlab/estimate.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fvlab/compensated_sum.hpp"

namespace fvlab {

double Estimate::standard_error() const {
  return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
}

Estimate summarize(std::span<const double> values) {
  Estimate e;
  e.count = static_cast<std::int64_t>(values.size());
  if (e.count == 0) return e;
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  e.mean = sum.value() / static_cast<double>(e.count);
  if (e.count > 1) {
    CompensatedSum sq;
    for (double v : values) sq.add((v - e.mean) * (v - e.mean));
    e.variance = sq.value() / static_cast<double>(e.count - 1);
  }
  e.ci99_half_width = 2.576 * e.standard_error();
  return e;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<double> collect_replicates(std::int64_t count, int threads,
                                       const std::function<double(std::int64_t)>& worker) {
  if (count < 1) throw std::invalid_argument("collect_replicates: count must be at least 1");
  std::vector<double> values(static_cast<std::size_t>(count));
  const int nthreads = std::min<std::int64_t>(resolve_threads(threads), count);
  if (nthreads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = worker(i);
    return values;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        while (true) {
          const std::int64_t i = next.fetch_add(1);
          if (i >= count) break;
          values[static_cast<std::size_t>(i)] = worker(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return values;
}

Estimate run_replicates(std::int64_t count, int threads,
                        const std::function<double(std::int64_t)>& worker) {
  const std::vector<double> values = collect_replicates(count, threads, worker);
  return summarize(values);
}

}  // namespace fvlab
