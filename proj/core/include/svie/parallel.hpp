#pragma once

#include <cstddef>
#include <functional>

namespace svie {

/// Runs fn(i) for i in [0, n) on `workers` threads (0 = hardware count).
/// Work is assigned by index, so results written to per-index slots are
/// independent of the worker count.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

} // namespace svie
