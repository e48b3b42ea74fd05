#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace opcat {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> threads{1};
  return threads;
}
}  // namespace detail

// Number of worker threads used when building composition tables. Results
// never depend on this value.
inline unsigned worker_threads() { return detail::thread_setting().load(); }
inline void set_worker_threads(unsigned n) { detail::thread_setting().store(std::max(1u, n)); }

// Runs fn(i) for i in [0, n). Each index must only write state owned by i.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned threads = std::min<std::size_t>(worker_threads(), n == 0 ? 1 : n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace opcat
