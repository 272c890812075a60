#include "reidrank/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace reidrank {

namespace {

std::atomic<int> g_thread_override{0};

int resolve_auto() {
    if (const char* env = std::getenv("REIDRANK_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int thread_count() {
    int n = g_thread_override.load(std::memory_order_relaxed);
    return n > 0 ? n : resolve_auto();
}

void set_thread_count(int n) {
    g_thread_override.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

void parallel_chunks(std::ptrdiff_t count, std::ptrdiff_t chunk_size,
                     const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& fn) {
    if (count <= 0) return;
    if (chunk_size <= 0) chunk_size = 1;
    const std::ptrdiff_t num_chunks = (count + chunk_size - 1) / chunk_size;
    const int workers = std::min<std::ptrdiff_t>(thread_count(), num_chunks);

    auto run_chunk = [&](std::ptrdiff_t c) {
        const std::ptrdiff_t begin = c * chunk_size;
        fn(begin, std::min(begin + chunk_size, count));
    };

    if (workers <= 1) {
        for (std::ptrdiff_t c = 0; c < num_chunks; ++c) run_chunk(c);
        return;
    }

    std::atomic<std::ptrdiff_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::ptrdiff_t c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= num_chunks) return;
                try {
                    run_chunk(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace reidrank
