#pragma once

#include <thread>
#include <vector>

// Deterministic data-parallel helper: results land in per-index slots and are
// combined in index order, so the output is independent of the thread count.

namespace hypflow {

template <typename Fn>
void parallelForIndexed(int n, Fn&& fn, int maxThreads = 0) {
    int hw = maxThreads > 0 ? maxThreads
                            : static_cast<int>(std::thread::hardware_concurrency());
    hw = std::max(1, std::min(hw, 16));
    if (hw == 1 || n < 64) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (n + hw - 1) / hw;
    for (int t = 0; t < hw; ++t) {
        int lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn]() {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hypflow
