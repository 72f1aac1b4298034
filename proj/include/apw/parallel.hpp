#pragma once

#include <cstddef>
#include <functional>

namespace apw {

/// Thread cap: explicit override if set, else APERIODIC_WANNIER_THREADS, else
/// hardware concurrency.
int thread_cap();
void set_thread_cap(int cap);  // cap <= 0 clears the override

/// Runs body(i) for i in [0, n). Each index is processed exactly once and
/// callers write only to slot i, so results do not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace apw
