#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cplab {

// Worker cap: CPLAB_THREADS if set, else hardware concurrency.
inline long worker_limit() {
    if (const char* env = std::getenv("CPLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<long>(hw);
}

// Runs fn(i) for i in [0, count).  Each index is handled exactly once, so
// result slots indexed by i are deterministic regardless of thread count.
inline void parallel_for(long count, const std::function<void(long)>& fn) {
    const long workers = std::min(worker_limit(), count);
    if (workers <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn] {
            for (long i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace cplab
