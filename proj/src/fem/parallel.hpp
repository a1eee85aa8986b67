#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

#include "bbmwave/fem.hpp"

namespace bbmwave::detail {

// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is handled
// by exactly one call, so writes to per-index slots need no synchronization.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  constexpr std::size_t kMinChunk = 2048;
  const std::size_t workers = std::min(worker_count(), (n + kMinChunk - 1) / kMinChunk);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace bbmwave::detail
