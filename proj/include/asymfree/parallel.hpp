#pragma once

#include <cstdint>
#include <functional>

namespace asymfree {

// Thread count resolution: requested > 0 wins, else ASYMFREE_THREADS, else
// hardware concurrency. Results never depend on the value, only wall time.
int resolve_threads(int requested);

// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries are a
// function of n and chunk alone, so per-chunk work is identical for every
// thread count; callers reduce per-index or per-chunk results in index order
// to keep aggregate statistics bit-reproducible.
void parallel_chunks(std::int64_t n, std::int64_t chunk, int threads,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace asymfree
