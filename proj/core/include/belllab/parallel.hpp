#ifndef BELLLAB_PARALLEL_HPP
#define BELLLAB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace belllab {

/// requested if nonzero, else BELLLAB_THREADS if set, else hardware
/// concurrency. BELLLAB_THREADS also caps an explicit request.
unsigned resolve_threads(unsigned requested = 0);

/// Calls body(begin, end) over contiguous chunks of [0, count). Chunks are
/// fixed by (count, threads), so any per-index result is independent of
/// scheduling. The first exception thrown by a worker is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, resolve_threads(threads)), count);
  if (workers <= 1) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = count * w / workers;
      const std::size_t end = count * (w + 1) / workers;
      pool.emplace_back([&, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace belllab

#endif  // BELLLAB_PARALLEL_HPP
