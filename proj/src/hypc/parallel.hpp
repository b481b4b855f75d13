#pragma once
// Deterministic helpers for splitting index ranges across worker threads.
// Chunk boundaries depend only on (n, workers), never on scheduling, so
// results written by index are reproducible for any worker count.

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hypc {

inline int default_workers() {
    if (const char* env = std::getenv("HYPCOUNT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) on contiguous chunks of [0, n).  fn must only write to
// locations owned by its index range.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (workers <= 0) workers = default_workers();
    if (n == 0) return;
    if (workers == 1 || n < 2048) {
        fn(0, n);
        return;
    }
    std::size_t w = static_cast<std::size_t>(workers);
    if (w > n) w = n;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        std::size_t lo = n * k / w, hi = n * (k + 1) / w;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hypc
