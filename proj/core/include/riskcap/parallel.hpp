#pragma once

#include <cstddef>
#include <functional>

namespace riskcap {

// Caps the number of worker threads used by chunk-parallel loops.
// 0 restores the default (hardware concurrency).
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs body(chunk) for every chunk in [0, n_chunks). Chunks are independent,
// so results only depend on the chunk index, never on scheduling.
void parallel_for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
    return (n + chunk_size - 1) / chunk_size;
}

} // namespace riskcap
