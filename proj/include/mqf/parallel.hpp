#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mqf {

// Runs f(i) for i in [0, n) over `workers` threads in contiguous blocks.
// Callers write results to per-index slots, so the outcome never depends on
// the worker count.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
    const std::size_t w = std::min<std::size_t>(std::max(workers, 1), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(w);
    {
        std::vector<std::jthread> threads;
        threads.reserve(w);
        for (std::size_t t = 0; t < w; ++t) {
            threads.emplace_back([&, t] {
                try {
                    const std::size_t lo = n * t / w, hi = n * (t + 1) / w;
                    for (std::size_t i = lo; i < hi; ++i) f(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace mqf
