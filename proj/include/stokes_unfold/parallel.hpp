#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace stokes_unfold {

// STOKES_UNFOLD_THREADS: 0 or unset means hardware concurrency
inline unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("STOKES_UNFOLD_THREADS");
    if (!env || !*env) return hw;
    try {
        long v = std::stol(env);
        if (v <= 0) return hw;
        return static_cast<unsigned>(v);
    } catch (...) {
        return hw;
    }
}

// fn(i) for i in [0, n); results must be written to disjoint slots by the caller
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = thread_cap();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stokes_unfold
