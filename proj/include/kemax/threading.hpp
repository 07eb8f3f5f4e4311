#pragma once

// Worker-count control and a blocked parallel-for. Work is split into fixed
// contiguous index blocks regardless of the worker count, so any reduction
// done per-block is bit-reproducible across thread settings.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace kemax {

inline int& thread_limit_storage() {
    static int limit = 0;  // 0 = use hardware concurrency
    return limit;
}

inline void set_thread_limit(int n) { thread_limit_storage() = n < 0 ? 0 : n; }

// KEMAX_THREADS caps the worker count; an explicit set_thread_limit wins.
inline int effective_threads() {
    int limit = thread_limit_storage();
    if (limit == 0) {
        if (const char* env = std::getenv("KEMAX_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) limit = v;
        }
    }
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    return limit > 0 ? std::min(limit, hw) : hw;
}

// fn(begin, end) over [0, n) in blocks of block_size. Blocks must be
// independent: results are written to disjoint ranges by the caller.
inline void parallel_blocks(std::size_t n, std::size_t block_size,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
    const int workers = effective_threads();
    if (workers <= 1 || n <= block_size) {
        for (std::size_t b = 0; b < n; b += block_size) fn(b, std::min(n, b + block_size));
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    const std::size_t nblocks = (n + block_size - 1) / block_size;
    const int nthreads = static_cast<int>(std::min<std::size_t>(workers, nblocks));
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                const std::size_t begin = b * block_size;
                fn(begin, std::min(n, begin + block_size));
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace kemax
