#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace blpc {

/// Worker count from BLPC_THREADS, or 1 when unset or malformed.
int default_thread_count();

/// `requested` when positive, otherwise default_thread_count().
int resolve_threads(int requested);

/// Calls fn(i) for i in [0, n) on up to `threads` workers using a static
/// contiguous partition. fn must only write state owned by index i, which
/// makes the result independent of the worker count. The first exception
/// thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace blpc
