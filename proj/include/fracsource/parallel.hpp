#pragma once

#include <cstddef>
#include <functional>

namespace fracsource {

/// Upper bound on worker threads used by parallel_for. 0 means
/// std::thread::hardware_concurrency().
void set_thread_limit(std::size_t n);
std::size_t thread_limit();

/// Calls body(i) for i in [0, n), spread over up to thread_limit() threads.
/// Each index is visited exactly once; body must not touch shared mutable state.
/// The first exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracsource
