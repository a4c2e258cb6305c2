#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <utility>
#include <vector>

namespace clmkit {

/// Exact floating-point accumulator (Shewchuk partials, as in fsum).
///
/// The running sum is kept as a list of non-overlapping doubles whose exact
/// sum equals the exact sum of everything added so far; value() rounds that
/// exact quantity once. The result therefore depends only on the multiset of
/// addends, never on the order they arrive in, which is what makes the
/// permutation-invariance guarantees of the measures hold bit-for-bit.
class ExactSum {
 public:
  ExactSum() { partials_.reserve(8); }

  void add(double x) {
    std::size_t used = 0;
    for (std::size_t i = 0; i < partials_.size(); ++i) {
      double y = partials_[i];
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[used++] = lo;
      x = hi;
    }
    partials_.resize(used);
    partials_.push_back(x);
  }

  /// Correctly rounded sum of all addends.
  double value() const {
    if (partials_.empty()) return 0.0;
    std::size_t n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Round-half-even can be off by one ulp when the discarded tail all
    // points the same way; nudge exactly as fsum does.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

  void clear() { partials_.clear(); }

 private:
  std::vector<double> partials_;
};

inline double exact_sum(std::span<const double> values) {
  ExactSum s;
  for (double v : values) s.add(v);
  return s.value();
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population form
};

/// Order-independent mean and population standard deviation.
inline MeanSd population_mean_sd(std::span<const double> values) {
  MeanSd out;
  if (values.empty()) return out;
  out.mean = exact_sum(values) / static_cast<double>(values.size());
  ExactSum dev;
  for (double v : values) {
    const double d = v - out.mean;
    dev.add(d * d);
  }
  out.sd = std::sqrt(dev.value() / static_cast<double>(values.size()));
  return out;
}

/// Runs fn(0..n-1) on up to `jobs` worker threads. Results must be written
/// into caller-owned slots keyed by index, so the schedule never shows.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (n == 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(jobs == 0 ? 1 : jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace clmkit
