#ifndef DECLUTTER_PARALLEL_HPP
#define DECLUTTER_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace declutter {

/**
 * Upper bound on worker threads used by batch computations. 0 means hardware concurrency.
 */
void set_thread_limit(std::size_t limit);
std::size_t thread_limit();

/**
 * Runs `fn(i)` for every i in [0, count). Each index must only write its own output
 * slot; results are then independent of the thread count.
 */
template<typename Function>
void parallel_for(std::size_t count, Function&& fn) {
    const std::size_t workers = std::min(thread_limit(), count / 64 + 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, begin, end]() {
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> guard(failure_lock);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}

#endif
