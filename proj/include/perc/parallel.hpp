#pragma once

#include <cstddef>
#include <functional>

namespace perc {

// Hardware concurrency, capped by the PERC_THREADS environment variable when
// it holds a positive integer. Always >= 1.
std::size_t worker_count();

// Calls body(i) for every i in [0, count), spread over worker_count() threads
// in contiguous blocks. body must only write to per-index state. The first
// exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace perc
