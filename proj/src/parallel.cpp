#include "longdiff/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace longdiff {

std::size_t worker_count() {
    if (const char* env = std::getenv("LONGDIFF_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            // fall through to hardware default
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
thread_local bool inside_region = false;

struct RegionGuard {
    bool previous;
    RegionGuard() : previous(inside_region) { inside_region = true; }
    ~RegionGuard() { inside_region = previous; }
};
}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    // Nested regions run serially on the calling worker.
    const std::size_t workers = inside_region ? 1 : std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        RegionGuard guard;
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace longdiff
