#pragma once

// Deterministic chunked map-reduce.  Work is split into fixed chunks; each
// chunk produces a partial result and partials are merged in chunk order,
// so the output does not depend on thread scheduling.  Worker count comes
// from TOTVAR_WORKERS (default: hardware concurrency).

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace totvar {

inline unsigned worker_count() {
    if (const char* env = std::getenv("TOTVAR_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// map(chunk_begin, chunk_end) -> R; reduce(acc, R) merges in index order.
// Chunk boundaries depend only on `chunk`, never on the worker count, so
// results are identical whatever TOTVAR_WORKERS says.
template <typename R, typename Map, typename Reduce>
R parallel_map_reduce(std::uint64_t begin, std::uint64_t end, R init,
                      Map map, Reduce reduce,
                      std::uint64_t chunk = 4096) {
    unsigned workers = worker_count();
    std::uint64_t total = end > begin ? end - begin : 0;
    if (total == 0) return init;
    if (workers <= 1 || total <= chunk) {
        std::uint64_t lo = begin;
        while (lo < end) {
            std::uint64_t hi = lo + chunk < end ? lo + chunk : end;
            R part = map(lo, hi);
            reduce(init, part);
            lo = hi;
        }
        return init;
    }
    std::uint64_t nchunks = (total + chunk - 1) / chunk;
    std::vector<R> partials(nchunks, init);
    std::atomic<std::uint64_t> next{0};
    auto body = [&] {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            std::uint64_t lo = begin + c * chunk;
            std::uint64_t hi = lo + chunk < end ? lo + chunk : end;
            partials[c] = map(lo, hi);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i + 1 < workers; ++i) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    for (auto& p : partials) reduce(init, p);
    return init;
}

// Runs body(lo, hi) over fixed-size chunks of [begin, end); chunks must be
// independent (e.g. each writes disjoint slots).
template <typename Body>
void parallel_for(std::uint64_t begin, std::uint64_t end, Body body,
                  std::uint64_t chunk = 4096) {
    parallel_map_reduce<int>(
        begin, end, 0,
        [&](std::uint64_t lo, std::uint64_t hi) {
            body(lo, hi);
            return 0;
        },
        [](int&, int) {}, chunk);
}

} // namespace totvar
