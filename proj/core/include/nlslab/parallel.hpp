#pragma once

#include <cstddef>
#include <functional>

namespace nlslab {

// NLSLAB_THREADS if set, otherwise the hardware concurrency
int default_threads();

// runs body(i) for i in [0, n); results must go to per-index slots so output order never
// depends on scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace nlslab
