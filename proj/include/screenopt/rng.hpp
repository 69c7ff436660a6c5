// Deterministic pseudo-random streams: one independent engine per
// replicate, derived from a master seed by a counter-based split so that
// results do not depend on how replicates are distributed over threads.
#pragma once

#include <cstdint>
#include <random>

namespace screenopt {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 stream_engine(std::uint64_t master_seed, std::uint64_t stream) {
    return std::mt19937_64(stream_seed(master_seed, stream));
}

}  // namespace screenopt
