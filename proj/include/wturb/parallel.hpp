#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace wturb {

// Runs fn(begin, end, chunk_index) over [0, n) split into a fixed number of
// chunks, distributed over `workers` threads. The chunk grid is independent
// of the worker count, and callers combine per-chunk partials in chunk-index
// order, so reductions built on this are bit-identical for any worker count.
template <typename Fn>
void parallel_chunks(std::size_t n, int workers, int chunks, Fn&& fn) {
    if (n == 0) return;
    if (chunks < 1) chunks = 1;
    if (static_cast<std::size_t>(chunks) > n) chunks = static_cast<int>(n);
    if (workers < 1) workers = 1;

    auto chunk_range = [&](int ci, std::size_t& b, std::size_t& e) {
        b = n * static_cast<std::size_t>(ci) / static_cast<std::size_t>(chunks);
        e = n * static_cast<std::size_t>(ci + 1) / static_cast<std::size_t>(chunks);
    };

    if (workers == 1) {
        for (int ci = 0; ci < chunks; ++ci) {
            std::size_t b, e;
            chunk_range(ci, b, e);
            fn(b, e, ci);
        }
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int ci = w; ci < chunks; ci += workers) {
                std::size_t b, e;
                chunk_range(ci, b, e);
                fn(b, e, ci);
            }
        });
    }
    for (auto& t : pool) t.join();
}

inline constexpr int kDefaultChunks = 64;

}  // namespace wturb
