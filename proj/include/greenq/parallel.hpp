#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace greenq {

/// Runs fn(k) for k in [0, count) on up to `threads` workers. Results must be
/// written to pre-sized slots so assembly is deterministic regardless of
/// completion order.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < count; k += workers) fn(k);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace greenq
