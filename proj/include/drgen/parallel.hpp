#pragma once

#include <cstddef>
#include <functional>

namespace drgen {

/// Worker count: hardware concurrency, capped by DRGEN_THREADS when set.
int worker_count();

/// Fixes the worker count regardless of hardware and DRGEN_THREADS (used by
/// tests to exercise threading on small machines). 0 restores the default.
void force_worker_count(int n);

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Calls made
/// from inside a worker run serially on that worker. The first exception
/// thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace drgen
