#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace coocnet {

/// Run fn(i) for i in [0, n_items) on up to `threads` workers.
/// Items are independent work units; callers that need deterministic results
/// must write each item's output to its own slot and merge in index order
/// afterwards. The schedule never feeds two calls the same index.
inline void parallel_for(std::size_t n_items, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n_items <= 1) {
    for (std::size_t i = 0; i < n_items; ++i) fn(i);
    return;
  }
  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, n_items));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_items) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace coocnet
