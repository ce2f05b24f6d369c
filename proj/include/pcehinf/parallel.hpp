#pragma once

#include <functional>

namespace pcehinf {

/// Worker count: PCE_HINF_THREADS if set to a positive integer, else the
/// hardware concurrency.
int worker_count();

/// Runs fn(0..n-1) on up to `threads` workers. Results must be written to
/// per-index slots by the caller; the first exception (lowest index) is
/// rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = worker_count());

}  // namespace pcehinf
