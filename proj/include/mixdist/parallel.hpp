#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mixdist {

/// Upper bound on worker threads used by parallel_for. 0 restores the default
/// (hardware concurrency).
void set_max_threads(unsigned count);
unsigned max_threads();

namespace detail {
bool& inside_worker();
}

/// Runs body(i) for i in [0, count). Work is split into contiguous blocks, one
/// per worker; body must only write to slots owned by index i, which makes the
/// result independent of the thread count. Nested calls run serially.
template <typename Body>
void parallel_for(std::size_t count, Body&& body)
{
    unsigned workers = max_threads();
    if (detail::inside_worker() || workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    if (workers > count)
        workers = static_cast<unsigned>(count);

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = begin + chunk < count ? begin + chunk : count;
        if (begin >= end)
            break;
        pool.emplace_back([&, begin, end] {
            detail::inside_worker() = true;
            try {
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
            detail::inside_worker() = false;
        });
    }
    for (auto& thread : pool)
        thread.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace mixdist
