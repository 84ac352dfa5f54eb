#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace densum {

inline unsigned effective_threads(unsigned requested) {
    if (requested == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? hw : 1;
    }
    return requested;
}

// Run fn(chunk_index) for chunk_index in [0, count). Chunks must touch
// disjoint state; the schedule is work-stealing but the result must not
// depend on it, which keeps output identical for any thread count.
inline void parallel_chunks(uint64_t count, unsigned threads,
                            const std::function<void(uint64_t)>& fn) {
    threads = effective_threads(threads);
    if (threads <= 1 || count <= 1) {
        for (uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = static_cast<unsigned>(std::min<uint64_t>(threads, count));
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace densum
