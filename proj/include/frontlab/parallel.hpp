#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace frontlab {

/// Runs fn(i) for i in [0, n) across hardware threads. Each index is written by
/// exactly one worker, so results stored by index are deterministic. The first
/// exception thrown by any worker is rethrown on the caller's thread.
/// `workers_hint = 0` uses the hardware concurrency.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers_hint = 0) {
  const std::size_t hw = workers_hint ? workers_hint : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace frontlab
