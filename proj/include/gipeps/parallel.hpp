#pragma once

#include <cstddef>
#include <functional>

namespace gipeps {

/// Worker count from GIPEPS_THREADS, else hardware concurrency; at least 1.
int worker_count();

/// Runs fn(i) for i in [0, n) on up to `threads` workers; the first exception is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

} // namespace gipeps
