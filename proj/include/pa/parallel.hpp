#pragma once

#include <cstddef>
#include <functional>

namespace pa {

// Worker count from PA_THREADS (default 1).
int thread_count();

// Runs fn(i) for i in [0, n); iterations must write to disjoint outputs.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace pa
