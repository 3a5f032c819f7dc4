#include "hdgauss/rng.hpp"

#include "hdgauss/linalg.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hdgauss {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x51ED2701D9B2C442ULL));
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

std::uint64_t RandomStream::raw() {
    return engine_();
}

double RandomStream::uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
    return normal_quantile(uniform01());
}

int worker_count() {
    int cap = 0;
    if (const char* env = std::getenv("HDGAUSS_THREADS")) {
        cap = std::atoi(env);
    }
    if (cap <= 0) {
        cap = static_cast<int>(std::thread::hardware_concurrency());
        if (cap <= 0) cap = 1;
    }
    return cap;
}

void parallel_chunks(std::int64_t n_chunks, const std::function<void(std::int64_t)>& fn) {
    if (n_chunks <= 0) return;
    const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), n_chunks));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= n_chunks) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hdgauss
