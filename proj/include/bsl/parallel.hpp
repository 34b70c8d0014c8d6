#pragma once

#include <cstddef>
#include <functional>

namespace bsl {

/// Number of worker threads: BSL_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads.
/// The first exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace bsl
