#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace surfgrow {

/// Sample mean, unbiased variance and standard error sqrt(var / count).
struct EnsemblePoint {
  double axis = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  long count = 0;
};

/// Two-pass estimate over values in the given (fixed) order.
inline EnsemblePoint summarize(std::span<const double> values, double axis = 0.0) {
  EnsemblePoint p;
  p.axis = axis;
  p.count = static_cast<long>(values.size());
  if (values.empty()) return p;
  double s = 0.0;
  for (double v : values) s += v;
  p.mean = s / static_cast<double>(values.size());
  if (values.size() > 1) {
    double q = 0.0;
    for (double v : values) q += (v - p.mean) * (v - p.mean);
    p.variance = q / static_cast<double>(values.size() - 1);
    p.std_error = std::sqrt(p.variance / static_cast<double>(values.size()));
  }
  return p;
}

/// z = (estimate - expected) / se; zero when both the gap and se vanish.
inline double z_score(double estimate, double expected, double se) {
  const double gap = estimate - expected;
  if (se > 0.0) return gap / se;
  return gap == 0.0 ? 0.0 : (gap > 0 ? INFINITY : -INFINITY);
}

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks write to
/// their own slots; callers reduce afterwards in index order, which keeps
/// results independent of the worker count.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, count); ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace surfgrow
