#pragma once

#include <cstddef>
#include <functional>

namespace hdfts {

// Number of worker threads to use. Reads the HDFTS_THREADS environment
// variable on every call (values < 1 or unparsable fall back to the
// hardware concurrency); returns at least 1.
std::size_t thread_budget();

// Run body(i) for i in [0, n). Work is split across thread_budget()
// threads; each index is processed exactly once and bodies must only
// write to disjoint, preallocated slots so that results are identical
// to a serial loop. The first exception thrown by any body is rethrown
// on the calling thread after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hdfts
