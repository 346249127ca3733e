#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ustlab {

/// Runs fn(t) for t in [0, count) on up to `jobs` threads. Each index is
/// handled exactly once; callers write into pre-sized per-index slots, so the
/// merged result never depends on scheduling. The first exception thrown by
/// any worker is rethrown on the calling thread.
template <class Fn>
void for_each_trial(std::size_t count, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, jobs);
    if (jobs == 1 || count < 2) {
        for (std::size_t t = 0; t < count; ++t) fn(t);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, count);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < count; t += workers) fn(t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace ustlab
