#pragma once

/// Minimal deterministic parallel-for.
///
/// Work is split into contiguous chunks, one per worker; each worker writes
/// only to its own output slots, so results are independent of scheduling.
/// The worker count is capped by the PARALATTICE_THREADS environment variable
/// (default: hardware concurrency).

#include <algorithm>
#include <cstdlib>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace paralattice {

/// Number of workers to use: min(PARALATTICE_THREADS, hardware), at least 1.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("PARALATTICE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
        if (v >= 1 && hw == 0) hw = static_cast<unsigned>(v);
    }
    return hw;
}

/// Apply fn(i) for i in [0, n). fn must only touch state private to index i.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    unsigned workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t lo = static_cast<std::int64_t>(w) * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace paralattice
