#pragma once

#include <cstddef>
#include <functional>

namespace mvfp {

// Worker count: MVFP_THREADS if set and positive, else hardware concurrency.
int default_thread_count();

// Runs fn(i) for i in [0, count). Work items must write only to their own
// slots; under that contract the result is independent of the thread count,
// so a run is reproducible whether it executes on 1 or N workers.
// threads <= 0 selects default_thread_count(). Exceptions from workers are
// rethrown (first one wins).
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace mvfp
