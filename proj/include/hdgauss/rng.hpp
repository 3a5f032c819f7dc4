#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace hdgauss {

/// Deterministic stream seed for a worker: hash(master_seed, index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Seeded random stream. Normal draws go through the library's Phi^{-1}, so
/// output is bit-identical across platforms for a given seed.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t raw();

    /// Uniform on the open interval (0, 1).
    double uniform01();

    double normal();

private:
    std::mt19937_64 engine_;
};

/// Worker cap from HDGAUSS_THREADS (0 or unset means auto).
int worker_count();

/// Runs fn(chunk_index) for chunk_index in [0, n_chunks) across workers.
/// Chunk assignment is pull-based; callers must make fn independent of
/// execution order (e.g. write into per-chunk slots).
void parallel_chunks(std::int64_t n_chunks, const std::function<void(std::int64_t)>& fn);

}  // namespace hdgauss
