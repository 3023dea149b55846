#pragma once

#include <cstddef>
#include <functional>

namespace locfuse {

// Worker count: LOCFUSE_THREADS if set and positive, otherwise the hardware
// concurrency.
std::size_t worker_count();

// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
// Chunks are independent, so results written per index are deterministic
// regardless of thread count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace locfuse
