#pragma once

#include <cstddef>
#include <functional>

namespace radonlik {

/// Worker threads used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; bodies
/// must write only to slots owned by their index. The first exception thrown
/// by any body is rethrown on the calling thread. Calls made from inside a
/// body run serially on that worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace radonlik
