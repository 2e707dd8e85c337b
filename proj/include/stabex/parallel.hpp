#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace stabex {

/// Worker count from STABEX_THREADS (default 1). Results must not depend on
/// the setting: callers write into per-index slots and reduce in index order.
inline int configured_threads() {
  if (const char* s = std::getenv("STABEX_THREADS")) {
    int v = std::atoi(s);
    if (v > 0) return v;
  }
  return 1;
}

/// Runs fn(i) for i in [0, n) across configured_threads() workers. The first
/// exception thrown by any worker is rethrown after all workers finish.
inline void parallel_for_index(size_t n, const std::function<void(size_t)>& fn) {
  size_t workers = std::min<size_t>(static_cast<size_t>(configured_threads()), n ? n : 1);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stabex
