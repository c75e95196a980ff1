#pragma once

#include <cstddef>
#include <functional>

namespace fellq::detail {

// Number of worker threads: FELLQ_THREADS if set, else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n).  Work is split into contiguous chunks, one per
// worker; results must be written to preassigned slots so the reduction order
// (performed by the caller afterwards) stays deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fellq::detail
