#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace uaveh {

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Work is claimed dynamically; the first exception is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t count, const Body& body, unsigned max_threads = 0) {
    unsigned hw = max_threads != 0 ? max_threads : std::thread::hardware_concurrency();
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(std::max(hw, 1u), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace uaveh
