#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace pht {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Work items must
// be independent; results should be written to pre-sized slots.
template <typename Fn>
void parallel_for(int count, int workers, Fn fn) {
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int n = std::min(workers, count);
    pool.reserve(n);
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace pht
