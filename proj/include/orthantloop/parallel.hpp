#pragma once

#include <functional>

namespace oloop {

// Worker count: hardware concurrency capped by ORTHANTLOOP_THREADS.
int thread_count();

// Runs fn(0..n-1). Callers write into per-index slots and reduce in index
// order afterwards, so results do not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace oloop
