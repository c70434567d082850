#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace spherevar {

// Number of workers to use: explicit request if positive, else the
// SPHERE_LAB_WORKERS environment variable, else hardware concurrency.
int resolve_workers(int requested);

// Run fn(i) for i in [0, count) across `workers` threads. Work items are
// claimed through a shared counter but each item writes only its own slot,
// so any reduction done in slot order afterwards is independent of the
// worker count and of scheduling.
template <typename Fn>
void parallel_indexed(std::int64_t count, int workers, Fn&& fn) {
    if (count <= 0) return;
    if (workers <= 1 || count == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::int64_t>(workers, count));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

}  // namespace spherevar
