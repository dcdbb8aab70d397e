#pragma once

#include <cstddef>
#include <functional>

namespace longdiff {

// Worker cap: LONGDIFF_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
// handled by exactly one call; callers write results into per-index slots
// and reduce afterwards in a fixed order. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace longdiff
