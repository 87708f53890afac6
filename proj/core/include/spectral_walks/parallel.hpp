#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace spectral_walks {

/// Resolves a requested worker count; 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Calls fn(begin, end) on contiguous chunks of [0, n) from up to `threads`
/// workers. Chunks are disjoint, so fn may write to per-index outputs.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace spectral_walks
