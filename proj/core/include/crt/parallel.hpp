#pragma once

#include <cstddef>
#include <functional>

namespace crt {

/// Number of worker threads. Honors the CRT_THREADS environment variable
/// (0 or unset means hardware concurrency).
int worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// fn(begin, end) on each. Chunk boundaries depend only on n and the worker
/// count, so writes to disjoint output ranges stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace crt
