#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tml {

// Process-wide worker count used by the bulk scans. Results never depend on it:
// work is split into chunks whose boundaries depend only on the problem size,
// and per-chunk results are merged in chunk order.
inline std::atomic<unsigned>& worker_count() {
  static std::atomic<unsigned> n{1};
  return n;
}

inline void set_worker_count(unsigned n) { worker_count() = std::max(1u, n); }

// Calls fn(chunk_index, begin, end) for every chunk of [0, count).
template <class Fn>
void for_each_chunk(std::size_t count, std::size_t chunk_size, Fn&& fn) {
  if (count == 0) return;
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), chunks));
  auto body = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    fn(c, begin, std::min(count, begin + chunk_size));
  };
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          body(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tml
