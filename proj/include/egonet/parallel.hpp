#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace egonet {

// Chunked parallel loop over [0, n). The body receives disjoint index ranges
// and must only write to per-index slots, which keeps results deterministic
// regardless of scheduling.
template <typename Body>
void parallel_for(std::size_t n, const Body& body, unsigned max_threads = 0) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned threads = max_threads == 0 ? hw : std::min(max_threads, hw);
    if (threads <= 1 || n < 2 * threads) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = static_cast<std::size_t>(t) * chunk;
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

} // namespace egonet
