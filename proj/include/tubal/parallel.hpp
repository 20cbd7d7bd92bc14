#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tubal {

namespace detail {
inline std::atomic<unsigned> &thread_setting() {
  static std::atomic<unsigned> n{1};
  return n;
}
} // namespace detail

/// Degree of parallelism used by the slice- and tube-parallel kernels.
/// Results never depend on this value.
inline void set_num_threads(unsigned n) {
  detail::thread_setting() = std::max(1u, n);
}

inline unsigned num_threads() { return detail::thread_setting(); }

/// Runs body(i) for i in [0, n). Work items must be independent; each item
/// is executed exactly once, so outputs are bitwise independent of the
/// thread count.
template <class Body> void parallel_for(std::size_t n, Body &&body) {
  const std::size_t workers =
      std::min<std::size_t>(num_threads(), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++)
        body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure)
        failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t)
    pool.emplace_back(run);
  run();
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace tubal
