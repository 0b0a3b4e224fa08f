#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace contamix {

/// Number of chunks parallel_chunks uses for (count, workers).
inline std::size_t chunk_count(std::size_t count, std::size_t workers) noexcept {
  return std::max<std::size_t>(1, std::min(workers, count));
}

/// Splits [0, count) into chunk_count(count, workers) contiguous chunks and
/// runs body(chunk, begin, end) on each, one thread per chunk. Chunk
/// boundaries depend only on (count, workers); chunk c covers indices below
/// those of chunk c + 1. The first exception raised by any chunk is rethrown.
template <class Body>
void parallel_chunks(std::size_t count, std::size_t workers, Body&& body) {
  workers = chunk_count(count, workers);
  if (workers == 1) {
    if (count > 0) body(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t base = count / workers;
  const std::size_t extra = count % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + base + (w < extra ? 1 : 0);
    threads.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Default worker count: hardware concurrency, at least one.
inline std::size_t default_workers() noexcept {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace contamix
