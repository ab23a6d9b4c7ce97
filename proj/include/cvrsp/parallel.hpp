#pragma once

#include <cstddef>
#include <functional>

namespace cvrsp {

/// Worker count: CVRSP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
unsigned thread_count();

/// Calls body(i) for i in [0, n). Each index is visited exactly once, so
/// bodies writing only to slot i give results independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cvrsp
