#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace irs {

/// Number of workers to use when the caller passes 0.
[[nodiscard]] inline std::size_t default_workers() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls body(i) for i in [0, count) on up to `workers` threads (0 = one per
/// core). Work is claimed dynamically, so body must write only to slot i of
/// any shared output; the first exception thrown is rethrown after all
/// workers join.
template <class Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
    if (workers == 0) workers = default_workers();
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace irs
