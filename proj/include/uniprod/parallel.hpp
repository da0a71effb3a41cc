#pragma once

/// Index-parallel loops capped by UNIPROD_THREADS.  Callers write results into
/// per-index slots, so output never depends on the schedule.

#include <cstddef>
#include <functional>

namespace uniprod {

/// Worker count: UNIPROD_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned thread_budget();

/// Runs body(i) for i in [0, n).  The first exception thrown by any body is
/// rethrown after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace uniprod
