#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rpaths {

// Runs fn(i) for i in [0, n) across `workers` threads and returns the results
// indexed by i. Work is handed out in fixed-size blocks through an atomic
// cursor; since every result lands in its own slot, the output is identical
// for any worker count.
template <class Fn>
auto parallel_map(long n, int workers, Fn&& fn)
    -> std::vector<decltype(fn(0L))> {
  using T = decltype(fn(0L));
  std::vector<T> out(static_cast<std::size_t>(n));
  if (n == 0) return out;
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }

  std::atomic<long> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const long block = std::max(1L, n / (static_cast<long>(workers) * 32));

  auto work = [&]() {
    for (;;) {
      const long start = cursor.fetch_add(block);
      if (start >= n || failed.load(std::memory_order_relaxed)) break;
      const long stop = std::min(n, start + block);
      for (long i = start; i < stop; ++i) {
        try {
          out[static_cast<std::size_t>(i)] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
  return out;
}

}  // namespace rpaths
