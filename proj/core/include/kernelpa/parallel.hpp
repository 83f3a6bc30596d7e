#pragma once

#include <cstddef>
#include <functional>

namespace kernelpa {

/// Worker count used by the library: hardware concurrency, capped by the
/// KERNELPA_THREADS environment variable when it is set to a positive integer.
[[nodiscard]] std::size_t worker_count();

/// Runs `body(i)` for every i in [0, n). Indices are split into contiguous
/// chunks, one per worker. Each index must only write state it owns, which
/// makes the result independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kernelpa
