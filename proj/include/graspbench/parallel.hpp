#ifndef GRASPBENCH_PARALLEL_HPP
#define GRASPBENCH_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace graspbench {

/// Worker count: explicit request, else GRASPBENCH_THREADS, else hardware.
inline unsigned effective_thread_count(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GRASPBENCH_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to index-owned slots; the schedule is static so the output is
/// identical for any worker count.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn, unsigned threads = 0) {
    unsigned workers = effective_thread_count(threads);
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace graspbench

#endif
