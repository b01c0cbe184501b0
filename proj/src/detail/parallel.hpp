// Internal: worker pool loop and mergeable Monte Carlo accumulators.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "fk/stochastic.hpp"

namespace fk::detail {

/// Samples are drawn in fixed-size chunks; chunk c uses substream c of the
/// caller's seed. Results therefore do not depend on the worker count.
inline constexpr std::size_t kChunkSize = 1024;

/// body(i) for i in [0, n), statically interleaved over `workers` threads.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Welford mean/variance plus the k largest samples, mergeable in a fixed order.
class WeightStats {
 public:
  explicit WeightStats(std::size_t top_k = 0) : top_k_(top_k) {}

  void add(double w) {
    ++count_;
    const double delta = w - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (w - mean_);
    sum_ += w;
    push_top(w);
  }

  void merge(const WeightStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(count_);
    const double n_b = static_cast<double>(other.count_);
    const double n = n_a + n_b;
    const double delta = other.mean_ - mean_;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    count_ += other.count_;
    sum_ += other.sum_;
    for (double w : other.top_) push_top(w);
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double sum() const { return sum_; }
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double std_error() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }
  /// Fraction of the total carried by the top_k largest samples.
  double top_share() const {
    if (sum_ <= 0.0) return 0.0;
    double s = 0.0;
    for (double w : top_) s += w;
    return s / sum_;
  }

 private:
  void push_top(double w) {
    if (top_k_ == 0) return;
    if (top_.size() < top_k_) {
      top_.push_back(w);
      std::push_heap(top_.begin(), top_.end(), std::greater<>{});
    } else if (w > top_.front()) {
      std::pop_heap(top_.begin(), top_.end(), std::greater<>{});
      top_.back() = w;
      std::push_heap(top_.begin(), top_.end(), std::greater<>{});
    }
  }

  std::size_t top_k_;
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double sum_ = 0.0;
  std::vector<double> top_;  // min-heap
};

/// Runs fill(engine, count, accumulator) per chunk and merges in chunk order.
template <class Acc, class Fill>
Acc run_chunks(std::size_t n_samples, unsigned workers, const RngSeed& seed, const Acc& prototype,
               Fill&& fill) {
  const std::size_t n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> partial(n_chunks, prototype);
  parallel_for(n_chunks, workers, [&](std::size_t c) {
    Engine engine = make_engine(seed, c);
    const std::size_t count = std::min(kChunkSize, n_samples - c * kChunkSize);
    fill(engine, count, partial[c]);
  });
  Acc total = prototype;
  for (const Acc& p : partial) total.merge(p);
  return total;
}

}  // namespace fk::detail
