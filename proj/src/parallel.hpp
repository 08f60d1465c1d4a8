#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qns::detail {

//! Calls fn(i) for i in [0, count) on up to `workers` threads. Work items
//! write to disjoint slots, so results do not depend on scheduling. The
//! first exception (lowest index) is rethrown after all threads join.
template<class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn)
{
    std::size_t nthreads = std::min<std::size_t>(std::max(1, workers), count);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        threads.emplace_back([&]() {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace qns::detail
