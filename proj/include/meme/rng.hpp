#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace meme::rng {

/// splitmix64 finalizer; used to derive independent per-task seeds from
/// a single master seed so parallel schedules cannot change results.
inline uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix(uint64_t a, const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix(a, h);
}

inline std::mt19937_64 make(uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace meme::rng
