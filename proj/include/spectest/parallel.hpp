// Minimal deterministic work-sharing helper.  Bodies write results into
// per-index slots, so the outcome is identical for any worker count.
#pragma once

#include <cstddef>
#include <functional>

namespace spectest {

/// Resolves a requested worker count; requested <= 0 means "auto"
/// (hardware concurrency, at least 1).
int resolve_workers(int requested);

/// Runs body(i) for i in [0, count).  workers <= 1 executes inline; otherwise
/// indices are pulled from a shared atomic counter by `workers` threads.
/// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body);

} // namespace spectest
