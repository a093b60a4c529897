#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace kgalign {

// Runs fn(i) for i in [0, count), split into contiguous chunks across
// `workers` threads. Callers must only write to per-index slots; fn must not
// throw. Results are position-addressed, so the outcome is identical to the
// sequential run.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, const Fn& fn) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    workers = std::min(workers, count);
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(begin + chunk, count);
        if (begin >= end) break;
        threads.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace kgalign
