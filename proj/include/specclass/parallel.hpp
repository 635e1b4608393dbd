#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace specclass {

// Worker count: SPECCLASS_THREADS caps parallelism, 0 or unset means auto.
inline unsigned thread_count() {
    static const unsigned cached = [] {
        unsigned hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        if (const char* env = std::getenv("SPECCLASS_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0 && static_cast<unsigned long>(v) < hw) return static_cast<unsigned>(v);
        }
        return hw;
    }();
    return cached;
}

// Runs fn(i) for i in [0, count). Each index must write only its own
// disjoint output so the result is independent of the schedule.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned threads = thread_count();
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace specclass
