#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace aniso {

/// Worker count: explicit request, else ANISO_THREADS, else hardware.
inline int resolve_thread_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ANISO_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) across workers. Each index owns its slot of
/// any output vector, so results are independent of the thread count; callers
/// reduce sequentially in index order. The lowest-index exception, if any, is
/// rethrown after all workers join.
template <typename Fn>
void parallel_for(int count, Fn&& fn, int threads = 0) {
    const int workers = std::min(resolve_thread_count(threads), std::max(count, 1));
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = w; i < count; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

}  // namespace aniso
