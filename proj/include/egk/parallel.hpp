#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace egk {

namespace detail {
inline int& thread_override() {
  static int v = 0;
  return v;
}
}  // namespace detail

// Explicit setting (e.g. --threads) wins over EGK_THREADS, which wins over the hardware count.
inline void set_thread_count(int n) { detail::thread_override() = std::max(0, n); }

inline int thread_count() {
  if (detail::thread_override() > 0) return detail::thread_override();
  if (const char* e = std::getenv("EGK_THREADS")) {
    const int v = std::atoi(e);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs f(i) for i in [0, count). Results must be written by index; the first exception is rethrown.
template <class F>
void parallel_for(long count, F&& f) {
  const int T = static_cast<int>(std::min<long>(thread_count(), count));
  if (T <= 1) {
    for (long i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex m;
  auto work = [&] {
    for (long i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(m);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < T; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace egk
