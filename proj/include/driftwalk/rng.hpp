#pragma once

#include <cstdint>

namespace driftwalk {

/// splitmix64 (Steele/Lea/Flood mixer).  Used only to expand seeds.
struct SplitMix64 {
    uint64_t state = 0;
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// Stream seed for repetition `index` under a master seed.  Each repetition
/// gets its own generator, so results do not depend on how repetitions are
/// scheduled across threads.
inline uint64_t derive_stream_seed(uint64_t master, uint64_t index) {
    SplitMix64 g{master + 0x9E3779B97F4A7C15ULL * (index + 1)};
    return g.next();
}

/// xoshiro256++ (Blackman & Vigna).
struct Xoshiro256pp {
    uint64_t s[4] = {1, 2, 3, 4};

    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t next() {
        const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static Xoshiro256pp seeded(uint64_t seed) {
        SplitMix64 g{seed};
        Xoshiro256pp rng;
        for (auto& word : rng.s) word = g.next();
        return rng;
    }
};

/// True with probability exactly num/den for a uniform 64-bit draw `u`
/// (compares u * den < num * 2^64 in 128-bit arithmetic; no rounding).
inline bool bernoulli_exact(uint64_t u, uint64_t num, uint64_t den) {
    return static_cast<unsigned __int128>(u) * den <
           (static_cast<unsigned __int128>(num) << 64);
}

}  // namespace driftwalk
