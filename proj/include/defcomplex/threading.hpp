#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace defc {

inline std::size_t& thread_count_ref() {
    static std::size_t n = 1;
    return n;
}
inline void set_thread_count(std::size_t n) { thread_count_ref() = n ? n : 1; }
inline std::size_t thread_count() { return thread_count_ref(); }

// Strided static split over [0, n). Iterations must write to disjoint
// slots; with that contract the result is identical for any thread
// count, which the output-determinism tests rely on.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
    std::size_t t = std::min(thread_count(), n ? n : std::size_t(1));
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w)
        pool.emplace_back([&fn, w, t, n] {
            for (std::size_t i = w; i < n; i += t) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace defc
