#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lerw {

/// Calls fn(k) for every k in [0, count) on up to `workers` threads. Each
/// index runs exactly once; callers write results into slot k, so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// task is rethrown after all threads join.
template <typename Fn>
void for_each_replica(std::int64_t count, int workers, Fn&& fn) {
    if (count <= 0) return;
    const auto threads = static_cast<int>(std::clamp<std::int64_t>(workers, 1, count));
    if (threads == 1) {
        for (std::int64_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::int64_t k = next++; k < count; k = next++) {
                    try {
                        fn(k);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace lerw
