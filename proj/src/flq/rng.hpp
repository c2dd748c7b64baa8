#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace flq {

// splitmix64 step; used for seeding and for seed derivation.
inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed-derivation chain: h <- sm64(h ^ w) for each word.
// This is the documented scheme for deriving instance seeds, per-loop
// substreams, per-restart substreams and bootstrap resample streams, so
// external tools can regenerate any piece of a run in isolation.
inline uint64_t hash64(std::initializer_list<uint64_t> words) {
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (uint64_t w : words) {
        uint64_t s = h ^ w;
        h = splitmix64_next(s);
    }
    return h;
}

// xoshiro256** by Blackman and Vigna; state seeded through splitmix64.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64_next(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 bits of precision.
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound); Lemire's method with rejection.
    uint64_t next_below(uint64_t bound) {
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            const uint64_t threshold = (-bound) % bound;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    // Standard normal via Marsaglia's polar method; one spare cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace flq
