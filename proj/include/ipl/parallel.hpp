#ifndef IPL_PARALLEL_HPP
#define IPL_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ipl {

/// Runs fn(begin, end) over contiguous chunks of [0, count) on `threads`
/// workers. Chunks are disjoint, so as long as fn writes only to rows in its
/// own range the result is identical for any thread count. threads <= 1 (or
/// a small count) runs inline.
template <typename Fn>
void parallel_for(std::ptrdiff_t count, int threads, Fn&& fn) {
    if (count <= 0) return;
    const int usable = std::max(1, threads);
    const std::ptrdiff_t chunk_min = 64;
    int n_chunks = static_cast<int>(std::min<std::ptrdiff_t>(usable, (count + chunk_min - 1) / chunk_min));
    if (n_chunks <= 1) {
        fn(std::ptrdiff_t{0}, count);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_chunks) - 1);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chunks));

    const std::ptrdiff_t per = (count + n_chunks - 1) / n_chunks;
    auto run = [&](int c) {
        const std::ptrdiff_t lo = c * per;
        const std::ptrdiff_t hi = std::min(count, lo + per);
        if (lo >= hi) return;
        try {
            fn(lo, hi);
        } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
    };
    for (int c = 1; c < n_chunks; ++c) pool.emplace_back(run, c);
    run(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace ipl

#endif // IPL_PARALLEL_HPP
