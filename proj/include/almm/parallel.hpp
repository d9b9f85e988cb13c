#ifndef ALMM_PARALLEL_HPP_
#define ALMM_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace almm {

/// Worker cap: ALMM_THREADS when set (>=1), else hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("ALMM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n). Each index is touched exactly once and
/// threads own disjoint contiguous ranges, so results cannot depend on
/// the schedule as long as fn(i) writes only to slot i.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::atomic_flag error_set = ATOMIC_FLAG_INIT;
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn, &error, &error_set]() {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        if (!error_set.test_and_set()) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace almm

#endif  // ALMM_PARALLEL_HPP_
