#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pisotcs::detail
{
//! Number of workers to use when the caller passes 0.
inline unsigned default_threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/*!
 * Call body(i) for i in [0, count) on a small worker pool.
 *
 * Indices are handed out dynamically; callers write results into
 * preallocated slots so that output order never depends on scheduling.
 * The first exception thrown by any worker is rethrown after all workers
 * have stopped.
 */
template<class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body)
{
    if (threads == 0)
        threads = default_threads();
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed))
        {
            std::size_t const i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed = true;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace pisotcs::detail
