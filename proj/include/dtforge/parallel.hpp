// Bounded fan-out over independent work items (time samples, eigenvalues).
#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace dtforge {

/// Worker cap: DTFORGE_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("DTFORGE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i in [0, count); the first exception (by index) is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errs(count);
    const unsigned workers = std::min<std::size_t>(thread_cap(), std::max<std::size_t>(count, 1));
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += workers) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace dtforge
