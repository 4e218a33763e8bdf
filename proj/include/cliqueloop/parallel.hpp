#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace cliqueloop {

/// Calls fn(i) for i in [0, count), statically partitioned over up to
/// `threads` workers. With threads <= 1 everything runs inline. `fn` must only
/// write state owned by index i.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(1, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

}  // namespace cliqueloop
