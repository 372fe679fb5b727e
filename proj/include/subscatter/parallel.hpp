#pragma once

#include <atomic>
#include <cstdlib>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace subscatter {

// Worker count for parallel loops. 0 = use hardware concurrency.
inline std::size_t& thread_count_slot() {
    static std::size_t n = 0;
    return n;
}

inline void set_thread_count(std::size_t n) { thread_count_slot() = n; }

inline std::size_t thread_count() {
    std::size_t n = thread_count_slot();
    if (n == 0) {
        if (const char* env = std::getenv("SUBSCATTER_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) n = static_cast<std::size_t>(v);
        }
    }
    if (n == 0) n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    return n;
}

// Runs fn(begin, end) over fixed-size chunks of [0, n). The chunk layout
// depends only on n and chunk, never on the worker count, and every chunk
// writes disjoint state, so output is identical for any number of workers.
template <typename F>
void parallel_for_chunks(std::size_t n, std::size_t chunk, const F& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    const std::size_t workers = std::min(thread_count(), nchunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
}

}  // namespace subscatter
