#pragma once

// Deterministic parallel reduction.
//
// Work is cut into fixed blocks of path indices that do not depend on the
// thread count. Each block is reduced sequentially with compensated sums,
// and block partials are merged by a fixed pairwise tree, so results are
// bit-identical for any number of threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hkmc {

void set_thread_count(unsigned n);
unsigned thread_count();

inline constexpr std::uint64_t kBlockSize = 256;

/// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  void merge(const CompensatedSum& o) noexcept {
    add(o.sum);
    comp += o.comp;
  }
  double value() const noexcept { return sum + comp; }
};

/// Running first and second moments of a sample.
struct Moments {
  CompensatedSum s1;
  CompensatedSum s2;
  std::uint64_t n = 0;

  void add(double x) noexcept {
    s1.add(x);
    s2.add(x * x);
    ++n;
  }
  void merge(const Moments& o) noexcept {
    s1.merge(o.s1);
    s2.merge(o.s2);
    n += o.n;
  }
  double mean() const noexcept { return n ? s1.value() / static_cast<double>(n) : 0.0; }
  /// Sample standard deviation (n - 1 denominator) over sqrt(n).
  double se() const noexcept {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = s1.value() / nn;
    const double var = std::max(0.0, (s2.value() - nn * m * m) / (nn - 1.0));
    return std::sqrt(var / nn);
  }
};

/// Runs body(begin, end) for every block of [0, n) on the worker threads and
/// returns the block results in block order.
template <class T, class Body>
std::vector<T> run_blocks(std::uint64_t n, Body&& body, std::uint64_t block = kBlockSize) {
  const std::uint64_t n_blocks = (n + block - 1) / block;
  std::vector<T> out(n_blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        out[b] = body(b * block, std::min(n, (b + 1) * block));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_blocks);
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), std::max<std::uint64_t>(n_blocks, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Pairwise tree merge in a fixed order; merge(a, b) folds b into a.
template <class T, class Merge>
T tree_reduce(std::vector<T> parts, Merge&& merge) {
  if (parts.empty()) return T{};
  for (std::size_t width = 1; width < parts.size(); width *= 2)
    for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) merge(parts[i], parts[i + width]);
  return std::move(parts[0]);
}

/// Moments of `n_out` per-path values; fn(index, double* out) fills them.
template <class PathFn>
std::vector<Moments> ensemble_moments(std::uint64_t n_paths, std::size_t n_out, PathFn&& fn) {
  auto parts = run_blocks<std::vector<Moments>>(n_paths, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<Moments> acc(n_out);
    std::vector<double> values(n_out);
    for (std::uint64_t i = begin; i < end; ++i) {
      fn(i, values.data());
      for (std::size_t j = 0; j < n_out; ++j) acc[j].add(values[j]);
    }
    return acc;
  });
  if (parts.empty()) return std::vector<Moments>(n_out);
  return tree_reduce(std::move(parts), [](std::vector<Moments>& a, const std::vector<Moments>& b) {
    for (std::size_t j = 0; j < a.size(); ++j) a[j].merge(b[j]);
  });
}

}  // namespace hkmc
