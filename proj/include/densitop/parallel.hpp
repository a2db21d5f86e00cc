#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace densitop {

// Splits [0, n) into contiguous chunks, one per worker. Each index is visited
// exactly once, so callers writing only to slot i stay deterministic.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Reads DENSITOP_THREADS; defaults to 1 when unset or malformed.
int threads_from_env();

}  // namespace densitop
