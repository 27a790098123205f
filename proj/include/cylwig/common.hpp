// Shared aliases, error types and the deterministic parallel loop helper.
#pragma once

#include <complex>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cylwig {

using cd = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr cd kI{0.0, 1.0};

// Integer division rounding toward negative infinity.
inline long floor_div(long a, long b) {
  long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// Thrown when a computation cannot satisfy its numerical contract
// (aliasing, truncation loss over budget, degenerate input, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thread count for data-parallel loops, from CYLWIG_THREADS (default 1).
inline int thread_count() {
  if (const char* env = std::getenv("CYLWIG_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// Runs fn(i) for i in [0, n). Work items must be independent; any reduction
// across items happens after the loop in index order, so results do not
// depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int threads = thread_count();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cylwig
