#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace matchscore {

/// Runs fn(i) for i in [0, count) on a small worker pool. Callers must write
/// results into per-index slots; merging in index order afterwards keeps the
/// overall computation deterministic regardless of scheduling.
inline void parallel_for_indexed(int count, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    int workers = static_cast<int>(hw == 0 ? 1 : hw);
    if (workers > count) workers = count;
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace matchscore
