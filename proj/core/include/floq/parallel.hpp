#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace floq {

/// Run job(i) for i in [0, n) on up to `threads` workers. Jobs must write
/// only to their own output slot; the caller reduces in index order, so the
/// result does not depend on the worker count.
template <typename Job>
void parallel_for(std::size_t n, int threads, Job&& job) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    const int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                job(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace floq
