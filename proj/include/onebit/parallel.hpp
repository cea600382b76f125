#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace onebit {

/// Runs fn(i) for i in [0, count) on `threads` workers. Each index is
/// processed exactly once; callers keep determinism by writing results into
/// per-index slots and reducing in index order afterwards.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace onebit
