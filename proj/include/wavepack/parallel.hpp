#pragma once

#include <cstdint>
#include <functional>

namespace wavepack {

// Worker count: WAVEPACK_THREADS if set (clamped to [1, 256]), otherwise
// hardware_concurrency clamped to [1, 8].
int thread_count();

// Runs fn(i) for every i in [0, n) across a bounded pool of worker threads
// using a static block partition, then joins. fn must be safe to invoke
// concurrently for distinct i. The first exception thrown by any worker is
// rethrown on the calling thread after the join.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace wavepack
