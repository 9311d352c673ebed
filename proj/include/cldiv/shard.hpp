#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "cldiv/types.hpp"

namespace cldiv {

struct Segment {
    u64 lo, hi;  // inclusive; empty when lo > hi
};

/// Split [lo, hi] into at most `parts` contiguous segments of near-equal size.
inline std::vector<Segment> split_range(u64 lo, u64 hi, unsigned parts)
{
    std::vector<Segment> out;
    if (lo > hi || parts == 0)
        return out;
    u64 len = hi - lo + 1;
    u64 n = std::min<u64>(parts, len);
    u64 step = len / n, extra = len % n;
    u64 start = lo;
    for (u64 i = 0; i < n; ++i) {
        u64 size = step + (i < extra ? 1 : 0);
        out.push_back({start, start + size - 1});
        start += size;
    }
    return out;
}

/*
 * Run fn(i) for i in [0, n) on up to `workers` threads and return the results
 * indexed by i, so the caller can merge in a fixed order.  The first
 * exception thrown by any task is rethrown after all threads join.
 */
template <class Fn>
auto run_sharded(std::size_t n, unsigned workers, Fn fn)
{
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> results(n);
    std::vector<std::exception_ptr> errors(n);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    auto body = [&](unsigned w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1 || n <= 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(body, w);
        for (auto & t : pool)
            t.join();
    }
    for (auto & e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

}  // namespace cldiv
