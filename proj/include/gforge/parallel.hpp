#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gforge {

/// Process-wide worker count; 0 means hardware concurrency.
inline std::atomic<int>& workerSetting() {
  static std::atomic<int> workers{0};
  return workers;
}

inline int workerCount() {
  int w = workerSetting().load();
  if (w <= 0) w = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return w;
}

/// Runs body(i) for i in [0, n) on a pool of workers. body returns false to
/// request early exit; the function then returns false once in-flight work
/// drains. Exceptions from any worker are rethrown on the caller.
template <class Body>
bool parallelFor(std::size_t n, Body&& body, int workers = 0) {
  if (workers <= 0) workers = workerCount();
  workers = static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex errorLock;
  auto run = [&] {
    try {
      while (!stop.load(std::memory_order_relaxed)) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        if (!body(i)) stop = true;
      }
    } catch (...) {
      std::lock_guard<std::mutex> guard(errorLock);
      if (!error) error = std::current_exception();
      stop = true;
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return !stop.load();
}

}  // namespace gforge
