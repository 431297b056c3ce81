#ifndef CSLAX_THREADING_HPP
#define CSLAX_THREADING_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace cslax::detail {

// Worker count: CSLAX_THREADS if set (>= 1), else the hardware concurrency.
inline int thread_count() {
    static const int n = [] {
        if (const char* e = std::getenv("CSLAX_THREADS")) {
            const int v = std::atoi(e);
            if (v >= 1)
                return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? static_cast<int>(hc) : 1;
    }();
    return n;
}

// Static-partition parallel loop: body(i) for i in [0, n).  Each index writes
// only its own outputs, so the partition does not affect results.
template <typename F>
void parallel_for(int n, F&& body) {
    const int nt = std::min(thread_count(), n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const int i0 = static_cast<int>(static_cast<long long>(n) * t / nt);
        const int i1 = static_cast<int>(static_cast<long long>(n) * (t + 1) / nt);
        pool.emplace_back([i0, i1, &body] {
            for (int i = i0; i < i1; ++i)
                body(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace cslax::detail

#endif
