#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qcx {

/// Worker count: QCX_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n) on worker_count()
/// threads. The first exception thrown by any chunk is rethrown.
/// Results must be written to per-index slots so reductions stay
/// independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// out[i] = fn(i) for i in [0, n), evaluated with parallel_for.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
  });
  return out;
}

}  // namespace qcx
