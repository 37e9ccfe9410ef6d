#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace t2x {

/// Number of workers to use when the caller passes 0.
inline int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs fn(index, worker) for index in [0, n). Work items are handed out
/// dynamically, so fn must write only to storage owned by its index.
/// The first exception thrown by any item is rethrown on the caller.
template <class Fn> void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 0)
    workers = default_workers();
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n)
          return;
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error)
            error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  pool.clear();
  if (error)
    std::rethrow_exception(error);
}

} // namespace t2x
