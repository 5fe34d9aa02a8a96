#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fluct {

// Runs fn(i) for i in [0, n) on `workers` threads pulling from a shared atomic
// counter. Each index writes only its own slot in caller-owned storage, so
// results are identical for any worker count. The first exception wins and is
// rethrown on the calling thread.
inline void parallel_for(size_t n, unsigned workers, const std::function<void(size_t)>& fn) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                failed.store(true);
            }
        }
    };
    unsigned k = static_cast<unsigned>(std::min<size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(k);
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace fluct
