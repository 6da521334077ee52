#pragma once

#include <cstddef>
#include <functional>

namespace efp {

/// Global cap on worker threads (default: hardware concurrency).
void set_max_threads(std::size_t n);
std::size_t max_threads();

/// Runs fn(chunk_index, begin, end) over [0, count) split into fixed-size
/// chunks. Chunk boundaries depend only on chunk_size, never on the thread
/// count, so chunk-indexed reductions are bitwise reproducible.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Convenience: fn(i) for each i in [0, count), independent iterations.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn,
                  std::size_t grain = 1);

}  // namespace efp
