#pragma once

#include <cstddef>
#include <functional>

namespace bekk {

/// Worker count used when a caller passes threads = 0.
int default_threads();

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Each index must
/// write only its own output slot; the result is then independent of the
/// schedule. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace bekk
