#pragma once

#include <cstddef>
#include <functional>

namespace srcloc {

// Worker count: SRCLOC_THREADS env var, else hardware concurrency.
unsigned worker_count();

// Run fn(0..count-1) across a small thread pool. Nested calls degrade to
// serial execution. Callers are responsible for writing to disjoint slots so
// results never depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace srcloc
