#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace linext::detail {

/// Runs fn(begin, end) over contiguous chunks of [0, count) on `threads`
/// workers (threads <= 0 means hardware concurrency). Chunking is a pure
/// function of (count, threads), so callers that index results by position
/// get schedule-independent output.
template <class Fn>
void parallel_chunks(std::int64_t count, int threads, Fn&& fn) {
  if (threads <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : int(hw);
  }
  threads = int(std::min<std::int64_t>(threads, count));
  if (threads <= 1) {
    fn(std::int64_t(0), count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  const std::int64_t base = count / threads, extra = count % threads;
  std::int64_t begin = 0;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t end = begin + base + (t < extra ? 1 : 0);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    begin = end;
  }
  for (auto& th : pool) th.join();
}

}  // namespace linext::detail
