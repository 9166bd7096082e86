#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace astopo {

// 0 means one worker per hardware thread.
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, count) into `workers` contiguous slices and runs
// fn(begin, end, worker) on each, joining before return. The first exception
// thrown by any worker is rethrown.
inline void parallel_slices(std::size_t count, unsigned workers,
                            const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
    workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1)));
    if (workers == 1) {
        fn(0, count, 0);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = count * w / workers;
        std::size_t end = count * (w + 1) / workers;
        pool.emplace_back([&, begin, end, w] {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace astopo
