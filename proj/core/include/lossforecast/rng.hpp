#pragma once

#include <cstdint>
#include <random>

namespace lossforecast {

/// splitmix64 mixing step.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic per-task seed derived from a run seed and stream tags.
/// Parallel and serial execution orders see identical streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a,
                                 std::uint64_t tag_b = 0, std::uint64_t tag_c = 0) {
    std::uint64_t s = mix64(seed ^ mix64(tag_a));
    s = mix64(s ^ mix64(tag_b + 0x1234567deadbeefULL));
    return mix64(s ^ mix64(tag_c + 0x0fedcba987654321ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t tag_a,
                                   std::uint64_t tag_b = 0, std::uint64_t tag_c = 0) {
    return std::mt19937_64(derive_seed(seed, tag_a, tag_b, tag_c));
}

} // namespace lossforecast
