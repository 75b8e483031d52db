#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace carbon {

// Runs fn(i) for i in [0, count) across up to `threads` workers (0 picks the
// hardware count). Tasks must be independent and write only to their own
// slots; the first exception is rethrown after all workers join, so results
// are deterministic regardless of the thread count.
inline void parallel_for(int count, const std::function<void(int)>& fn, int threads = 0) {
    if (count <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers > count) workers = count;
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace carbon
