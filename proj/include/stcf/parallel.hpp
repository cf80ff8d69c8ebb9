#pragma once

#include <cstddef>
#include <functional>

namespace stcf {

/// Worker count from STCF_THREADS (0 or unset = hardware concurrency).
std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Work is
/// handed out dynamically; callers write results by index so the outcome does
/// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace stcf
