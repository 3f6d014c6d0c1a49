#pragma once

#include <cstddef>
#include <functional>

namespace reso {

/// Caps the number of worker threads used by data-parallel loops.
/// Zero selects std::thread::hardware_concurrency().
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace reso
