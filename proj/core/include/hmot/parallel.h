#pragma once

#include <cstddef>
#include <functional>

namespace hmot {

/// Calls fn(i) for every i in [0, n) on up to `threads` workers. Each index
/// runs exactly once, so writing results to slot i keeps the output
/// independent of the thread count. The first exception is rethrown.
void ParallelFor(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace hmot
