// Minimal blocking parallel-for used by the flux sweeps. Work items write to
// disjoint slots, so results are bitwise identical for any thread count.

#ifndef KERR_PARALLEL_HPP
#define KERR_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace kerr {

inline int parallel_threads() {
  if (const char* env = std::getenv("KERR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

/// Runs fn(begin, end) over a partition of [0, n); rethrows the first
/// exception raised by any chunk.
template <typename Fn>
void parallel_for_chunks(int n, Fn&& fn) {
  const int threads = std::min(parallel_threads(), n);
  if (threads <= 1 || n <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int b = t * chunk;
    const int e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, t, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace kerr

#endif  // KERR_PARALLEL_HPP
