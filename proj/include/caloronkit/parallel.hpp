#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace caloronkit {

/// Worker count for data-parallel loops. Capped by CALORONKIT_THREADS.
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("CALORONKIT_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

// Fork-join over [0, n). Each worker receives a contiguous [begin, end)
// chunk, so per-point maps produce bit-identical results for any worker
// count as long as every point is written independently.
inline void parallel_for(long n, const std::function<void(long, long)>& body) {
  if (n <= 0) return;
  int workers = worker_count();
  long min_chunk = 1024;
  if (workers <= 1 || n < 2 * min_chunk) {
    body(0, n);
    return;
  }
  long chunks = std::min<long>(workers, (n + min_chunk - 1) / min_chunk);
  long step = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(chunks));
  for (long c = 0; c < chunks; ++c) {
    long b = c * step, e = std::min(n, b + step);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace caloronkit
