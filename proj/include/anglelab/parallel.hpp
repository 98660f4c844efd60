#pragma once

#include <cstddef>
#include <functional>

namespace anglelab {

// Environment variable that overrides an "auto" (0) worker request.
inline constexpr const char* kWorkersEnv = "ANGLELAB_WORKERS";

// 0 means auto: $ANGLELAB_WORKERS if set, else hardware concurrency.
unsigned resolve_workers(unsigned requested);

// Runs body(i) for every i in [0, count) on up to `workers` threads. Work items
// must write only to their own output slot; callers merge in index order so
// results never depend on the worker count. The first exception thrown by any
// item is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace anglelab
