#pragma once

#include <cstddef>
#include <functional>

namespace qsc::detail {

/// Worker count for ladder/field sweeps, from QSC_THREADS (default 1).
unsigned sweep_threads();

/// Runs fn(0..n-1), splitting across sweep_threads() workers. Each index owns
/// its output slot, so results are deterministic regardless of thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qsc::detail
