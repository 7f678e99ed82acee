#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zodiaclab {

inline unsigned effective_threads(unsigned requested) noexcept {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for every i in [0, count). Work items must be independent and
// write only to index-keyed slots so results are identical for any thread
// count. n_threads == 0 means hardware concurrency. The first exception is
// rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, unsigned n_threads, Fn&& fn) {
    n_threads = effective_threads(n_threads);
    if (count <= 1 || n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (n_threads > count) n_threads = static_cast<unsigned>(count);

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace zodiaclab
