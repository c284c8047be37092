#ifndef WCLUSTER_PARALLEL_HPP
#define WCLUSTER_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace wcluster {

/// Worker cap: set_max_threads() if called, else $WCLUSTER_THREADS, else the
/// hardware concurrency. Always >= 1.
std::size_t max_threads();

/// Overrides the worker cap; 0 restores the environment default.
void set_max_threads(std::size_t n);

/**
 * Runs body(i) for i in [0, n) on up to max_threads() workers with static
 * chunking. Nested calls from inside a worker run serially. If any body
 * throws, the exception from the smallest failing index is rethrown after
 * all workers join.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wcluster

#endif  // WCLUSTER_PARALLEL_HPP
