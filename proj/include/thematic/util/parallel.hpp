#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace thematic {

/// Runs fn(i) for i in [0, n) on at most `max_in_flight` threads. Results are
/// the caller's business (write into a pre-sized vector by index). If any
/// call throws, remaining work is abandoned and the exception of the lowest
/// failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t max_in_flight, Fn&& fn) {
  if (n == 0) return;
  std::size_t workers = std::clamp<std::size_t>(max_in_flight, 1, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  std::exception_ptr first_err;
  std::size_t first_err_index = n;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (!stop.load(std::memory_order_relaxed)) {
          std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(err_mu);
            if (i < first_err_index) {
              first_err_index = i;
              first_err = std::current_exception();
            }
            stop = true;
          }
        }
      });
    }
  }
  if (first_err) std::rethrow_exception(first_err);
}

}  // namespace thematic
