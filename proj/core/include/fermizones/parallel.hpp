#pragma once

#include <cstddef>
#include <functional>

namespace fermizones {

// Number of worker threads: min(hardware_concurrency, FERMIZONES_THREADS).
// FERMIZONES_THREADS=1 disables parallelism entirely.
int worker_thread_count();

// Runs fn(i) for i in [0, n) on a dynamic-chunk thread team. Results must be
// written to pre-sized per-index slots so that the outcome is independent of
// the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fermizones
