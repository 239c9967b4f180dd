#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gfflab {

// Worker count: GFFLAB_THREADS env var wins, then the requested value, then
// hardware concurrency.
inline int thread_count(int requested = 0) {
  if (const char* env = std::getenv("GFFLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count) across threads with a static stride
// schedule. Work items must be independent; any reduction happens after the
// join, in index order, so results do not depend on the thread count.
inline void parallel_for_index(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&, t]() {
      for (int i = t; i < count; i += workers) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace gfflab
