#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace knotfield {

inline unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    workers = resolve_workers(workers);
    const std::size_t blocks = std::min<std::size_t>(workers, std::max<std::size_t>(n, 1));
    const std::size_t chunk = (n + blocks - 1) / blocks;
    std::vector<std::exception_ptr> errors(blocks);

    auto run = [&](std::size_t b) {
        const std::size_t lo = b * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        try {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
            errors[b] = std::current_exception();
        }
    };

    if (blocks <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(blocks - 1);
        for (std::size_t b = 1; b < blocks; ++b) pool.emplace_back(run, b);
        run(0);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace knotfield
