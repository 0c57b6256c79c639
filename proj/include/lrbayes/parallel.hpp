#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

//! Static partition of [0, n) across worker threads. Bodies must write to
//! disjoint slots only; with per-case RNG streams the result is identical
//! for every worker count.

namespace lrbayes::detail {

template <typename Body>
void parallel_cases(std::size_t n, unsigned workers, const Body& body) {
    if (workers == 0) workers = 1;
    if (workers == 1 || n < 2 * static_cast<std::size_t>(workers)) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        if (lo >= n) break;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace lrbayes::detail
