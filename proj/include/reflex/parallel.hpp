#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace reflex {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Each index is
/// handled exactly once; callers write results into index-addressed slots so
/// the merged output never depends on scheduling. The first exception thrown
/// by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    if (count == 0) return;
    const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace reflex
