#pragma once

#include <cstddef>
#include <functional>

namespace cfa {

/// Worker cap: CFA_WORKERS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; if any call throws, the exception from the smallest
/// failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cfa
