#pragma once

#include <cstddef>
#include <functional>

namespace ptbench {

// Worker count: PTBENCH_THREADS when set (clamped to [1, 256]), otherwise the
// hardware concurrency.
int worker_count();

// Run chunk(begin, end) over contiguous slices of [0, n), one slice per
// worker. Slice boundaries depend only on n and the worker count, and callers
// write results by index, so output is bitwise independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk);

} // namespace ptbench
