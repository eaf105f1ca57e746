#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace oig
{
    // Runs body(i) for each i in [0, count) on a small thread pool. Callers
    // write results into preallocated index-addressed slots, so the outcome is
    // independent of scheduling.
    template <typename Body>
    void parallel_for(std::size_t count, Body && body)
    {
        std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
        workers = std::min(workers, count);
        if (workers <= 1) {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto run = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    body(i);
                }
                catch (...) {
                    std::lock_guard<std::mutex> guard(failure_mutex);
                    if (! failure)
                        failure = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run);
        for (auto & t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }
}
