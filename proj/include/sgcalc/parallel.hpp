#pragma once

#include <cstddef>
#include <functional>

namespace sgcalc {

/// Worker count: hardware concurrency capped by the SGCALC_THREADS
/// environment variable when it is set to a positive integer.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once;
/// callers write into per-index slots and reduce afterwards in index order so
/// results never depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sgcalc
