#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <thread>
#include <vector>

namespace swflow {

/// Worker count: explicit request, else SWFLOW_THREADS, else hardware
/// concurrency (at least 1).
std::size_t resolve_threads(std::optional<std::size_t> requested = std::nullopt);

/// Process-wide default used when callers do not pass a count.
std::size_t default_threads();
void set_default_threads(std::size_t count);

/// Runs f(i) for i in [0, n) on up to `threads` workers using static
/// contiguous chunks. f must write only to slots owned by i.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& f) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 1; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&f, begin, end] {
      for (std::size_t i = begin; i < end; ++i) f(i);
    });
  }
  for (std::size_t i = 0; i < std::min(n, chunk); ++i) f(i);
}

}  // namespace swflow
