#pragma once

// Tiny deterministic fork-join helper: results are collected by index, so
// parallel sweeps merge in the same order as a serial run.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace nilbal {

inline int default_jobs() {
    if (const char* env = std::getenv("NILBAL_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

template <class R>
std::vector<R> parallel_map(long long n, int jobs, const std::function<R(long long)>& fn) {
    std::vector<R> out(size_t(n));
    if (jobs <= 1 || n <= 1) {
        for (long long i = 0; i < n; ++i) out[size_t(i)] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::atomic<long long> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                long long i = next.fetch_add(1);
                if (i >= n) return;
                out[size_t(i)] = fn(i);
            }
        });
    for (auto& th : pool) th.join();
    return out;
}

} // namespace nilbal
