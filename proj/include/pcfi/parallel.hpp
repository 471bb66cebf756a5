#pragma once

#include <cstddef>
#include <functional>

namespace pcfi {

// Worker count used by parallel_for. Initialised from the PCFI_THREADS
// environment variable (0 or unset = hardware concurrency).
std::size_t num_threads();

// Overrides the worker count for the process; 0 restores auto detection.
void set_num_threads(std::size_t n);

// Calls fn(i) for every i in [0, n), spreading indices over the worker pool.
// Each index must write to disjoint output so results do not depend on the
// schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pcfi
