#include "urnsim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace urnsim {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("URNSIM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    const int n_workers =
        std::max(1, std::min<std::int64_t>(threads, count) > 0
                        ? static_cast<int>(std::min<std::int64_t>(threads, count))
                        : 1);
    if (n_workers == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto record_error = [&] {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
    };

    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        const std::int64_t begin = count * w / n_workers;
        const std::int64_t end = count * (w + 1) / n_workers;
        workers.emplace_back([&, begin, end] {
            try {
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                record_error();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace urnsim
