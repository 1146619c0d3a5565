#ifndef URNSIM_PARALLEL_HPP
#define URNSIM_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace urnsim {

// Thread count: explicit request > URNSIM_THREADS env > hardware concurrency.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, count) across `threads` workers with static
// chunking. Work items must be independent; results should be written to
// pre-sized slots indexed by i so the outcome is order-independent. The
// first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace urnsim

#endif  // URNSIM_PARALLEL_HPP
