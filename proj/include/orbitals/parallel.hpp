#pragma once

#include <cstddef>
#include <functional>

namespace orbitals {

/// Process-wide worker count used by parallel_for; at least 1.
void set_worker_count(std::size_t workers);
std::size_t worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end) for each. The first exception thrown by any chunk is
/// rethrown on the calling thread after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace orbitals
