#pragma once

#include <cstddef>
#include <functional>

namespace reidrank {

/// Worker count used by parallel loops. Resolution order: set_thread_count(n>0),
/// then the REIDRANK_THREADS environment variable, then hardware concurrency.
int thread_count();

/// Override the worker count. 0 restores automatic resolution.
void set_thread_count(int n);

/// Runs fn(begin, end) over [0, count) split into fixed-size chunks.
/// Chunk boundaries depend only on count and chunk_size, never on the worker
/// count, so any computation that writes disjoint per-chunk outputs produces
/// identical results for every thread count.
void parallel_chunks(std::ptrdiff_t count, std::ptrdiff_t chunk_size,
                     const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& fn);

}  // namespace reidrank
