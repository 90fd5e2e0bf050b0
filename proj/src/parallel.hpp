#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kss::detail {

inline unsigned resolve_workers(unsigned workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs body(i) for i in [0, count). Each index writes only its own output
// slot, so results do not depend on the worker count. The first exception
// thrown by any worker is rethrown here.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  const unsigned n = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1));
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n - 1);
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kss::detail
