#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hodgekit {

// Worker cap for internal parallelism. Controlled by the HODGEKIT_THREADS
// environment variable; defaults to the hardware concurrency. A value of 1
// disables threading entirely.
inline int max_threads() {
    static const int cached = [] {
        if (const char* env = std::getenv("HODGEKIT_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }();
    return cached;
}

// Chunked parallel loop over [0, n). The body receives (begin, end) index
// ranges. Used only for order-independent reductions (max/sum of per-point
// values), so results are deterministic regardless of the thread count.
inline void parallel_chunks(std::int64_t n, const std::function<void(std::int64_t, std::int64_t, int)>& body) {
    int threads = std::min<std::int64_t>(max_threads(), std::max<std::int64_t>(1, n));
    if (threads <= 1 || n < 4096) {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (n + threads - 1) / threads;
    for (int c = 0; c < threads; ++c) {
        std::int64_t b = c * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e, c] { body(b, e, c); });
    }
    for (auto& th : pool) th.join();
}

} // namespace hodgekit
