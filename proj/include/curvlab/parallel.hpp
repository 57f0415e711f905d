#pragma once

#include <cstddef>
#include <functional>

namespace curvlab {

/// Worker count: CURVLAB_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
int worker_count();

/// Calls body(begin, end, worker) on contiguous slices of [0, n). Slices are
/// assigned statically so results merged in worker order are deterministic.
void parallel_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& body);

}  // namespace curvlab
