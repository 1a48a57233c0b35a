#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace zpdehn {

// Worker count: ZPDEHN_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ZPDEHN_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(std::min<long>(v, 256));
    }
    return hw;
}

// Splits [0, n) into contiguous chunks, runs fn(chunk, begin, end) on worker
// threads and returns per-chunk results in chunk order, so merges are
// deterministic regardless of scheduling.
template <class Result, class Fn>
std::vector<Result> parallel_chunks(std::size_t n, Fn fn, unsigned threads = thread_count()) {
    std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    std::vector<Result> out(chunks);
    std::vector<std::exception_ptr> errs(chunks);
    auto run = [&](std::size_t c) {
        std::size_t b = n * c / chunks, e = n * (c + 1) / chunks;
        try {
            out[c] = fn(c, b, e);
        } catch (...) {
            errs[c] = std::current_exception();
        }
    };
    if (chunks == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(run, c);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace zpdehn
