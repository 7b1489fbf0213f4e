#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dynadetect {

inline unsigned default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

// Runs body(i) for i in [begin, end). Work items must be independent.
// Callers that aggregate floating-point results write into per-index slots
// and reduce sequentially afterwards, so output never depends on the
// thread count. threads <= 0 selects the hardware concurrency.
inline void parallel_for(std::uint64_t begin, std::uint64_t end, int threads,
                         const std::function<void(std::uint64_t)>& body) {
    if (end <= begin) return;
    const std::uint64_t count = end - begin;
    std::uint64_t nthreads = (threads <= 0) ? default_thread_count() : static_cast<std::uint64_t>(threads);
    if (nthreads > count) nthreads = count;
    if (nthreads <= 1) {
        for (std::uint64_t i = begin; i < end; ++i) body(i);
        return;
    }

    std::atomic<std::uint64_t> next{begin};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= end) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::uint64_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace dynadetect
