#pragma once

#include <cstddef>
#include <functional>

namespace rwnet {

// Process-wide cap on worker threads used by parallel_for. 0 means
// std::thread::hardware_concurrency().
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to
/// thread_count() threads. Exceptions thrown by a chunk are rethrown on the
/// calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace rwnet
