#pragma once

#include <cstddef>
#include <functional>

namespace weylscope {

// Worker count used by all parallel loops. Defaults to WEYLSCOPE_THREADS or
// the hardware concurrency.
int thread_count();
void set_thread_count(int threads);

// Calls body(i) for i in [0, count). Each index is visited exactly once; the
// body must only write state owned by index i, which keeps results
// independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace weylscope
