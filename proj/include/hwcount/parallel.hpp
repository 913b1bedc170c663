#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hwcount {

/// Worker cap for parallel loops: set_thread_cap() if called with n >= 1,
/// otherwise HW_COUNTS_THREADS, otherwise the hardware concurrency.
int thread_cap();
void set_thread_cap(int n);

/// Runs body(chunk) for chunk = 0..n_chunks-1 on up to thread_cap() threads.
/// Chunks write to disjoint outputs, so results never depend on scheduling.
/// The first exception thrown by any chunk is rethrown on the caller.
template <class F>
void parallel_chunks(std::size_t n_chunks, F&& body) {
    const std::size_t workers = std::min<std::size_t>(n_chunks, static_cast<std::size_t>(thread_cap()));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                body(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n_chunks);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace hwcount
