#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace scalecalc {

/// Worker threads used by embarrassingly parallel loops (1 = sequential).
void set_worker_threads(unsigned n);
unsigned worker_threads();

/// Runs body(begin, end) over [0, count) split into contiguous chunks.
/// Chunks below `min_chunk` items are not worth a thread.
template <class Body>
void parallel_chunks(std::size_t count, Body&& body, std::size_t min_chunk = 2048) {
    const unsigned threads = worker_threads();
    if (threads <= 1 || count < 2 * min_chunk) {
        body(std::size_t{0}, count);
        return;
    }
    const std::size_t parts = std::min<std::size_t>(threads, count / min_chunk);
    const std::size_t step = (count + parts - 1) / parts;
    std::vector<std::jthread> pool;
    pool.reserve(parts);
    for (std::size_t p = 0; p < parts; ++p) {
        const std::size_t begin = p * step;
        const std::size_t end = std::min(count, begin + step);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

}  // namespace scalecalc
