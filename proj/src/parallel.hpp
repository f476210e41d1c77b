#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xiqed::detail {

/// Runs body(i) for i in [0, count) on up to hardware_concurrency workers.
/// Each index is visited exactly once; the first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body &&body) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if(workers <= 1) {
        for(std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for(std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for(std::size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch(...) {
                        std::lock_guard lock(failure_mutex);
                        if(!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if(failure) std::rethrow_exception(failure);
}

} // namespace xiqed::detail
