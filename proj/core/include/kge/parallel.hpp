#pragma once

#include <cstdint>
#include <functional>

namespace kge {

// Caps the worker count used by parallel_for. n <= 0 restores the hardware default.
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, count) across at most max_threads() workers in
// contiguous chunks. Callers must write results to disjoint, preallocated
// slots so the outcome is independent of scheduling. The first exception
// thrown by any worker is rethrown after all workers join.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace kge
