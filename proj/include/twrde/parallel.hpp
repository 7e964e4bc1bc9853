#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace twrde {

// Runs fn(i) for i in [0, count) across up to `threads` workers.  Tasks must
// be independent; results may not depend on execution order.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t width = std::min<std::size_t>(std::size_t(threads), count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(width);
    for (std::size_t w = 0; w < width; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace twrde
