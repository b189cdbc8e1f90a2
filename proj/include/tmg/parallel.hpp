#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tmg {

namespace detail {
inline std::atomic<int>& worker_override() {
  static std::atomic<int> value{0};
  return value;
}
}  // namespace detail

/// Worker count: an explicit override if set, else TMG_WORKERS, else 1.
inline int worker_count() {
  if (const int o = detail::worker_override().load(); o > 0) return o;
  if (const char* env = std::getenv("TMG_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return std::min(n, 256);
  }
  return 1;
}

/// 0 restores the environment default.
inline void set_worker_count(int n) { detail::worker_override().store(std::max(0, n)); }

/// Runs fn(i) for i in [begin, end) split into contiguous chunks, one per worker.
/// Callers must make iterations independent; results are then scheduling-independent.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn, std::size_t min_chunk = 16) {
  const std::size_t n = end > begin ? end - begin : 0;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), (n + min_chunk - 1) / std::max<std::size_t>(min_chunk, 1));
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk, hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace tmg
