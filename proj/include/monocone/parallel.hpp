#pragma once

#include <cstddef>
#include <functional>

namespace monocone {

/// Worker count: MONOCONE_THREADS when set to a positive integer, else the hardware count.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads.
/// Results must be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace monocone
