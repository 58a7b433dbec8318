#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace taxjoin {

/// Runs fn(chunk_begin, chunk_end, worker) over [begin, end) split into
/// contiguous chunks, one per worker. With one thread the call is inline.
/// Workers receive disjoint ranges; merging partial results in worker
/// order keeps pipelines deterministic regardless of thread count.
template <typename Fn>
void parallel_chunks(std::size_t begin, std::size_t end, int threads, Fn&& fn) {
  const std::size_t total = end - begin;
  if (threads <= 1 || total <= 1) {
    if (total > 0) fn(begin, end, 0);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), total);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + total * w / workers;
    const std::size_t hi = begin + total * (w + 1) / workers;
    pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace taxjoin
