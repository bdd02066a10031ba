#pragma once

#include <cstdint>
#include <limits>

#include "mafia/errors.hpp"

// Deterministic random number generation.
//
// Everything here is fully specified in this header (no std::*_distribution,
// whose sequences are implementation-defined), so the same seed produces the
// same stream on every platform and compiler. Simulation results are pure
// functions of their seeds.

namespace mafia {

// SplitMix64 finalizer (Steele/Lea/Vigna). Used for seed expansion and for
// deriving per-trial seeds from a master seed.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed of trial `stream` under `master`. This is the documented mixing
// function behind every Monte Carlo harness: trial i is seeded by
// mix64(master ^ mix64(i + 1)), so trials are independent of execution
// order and of the number of workers.
constexpr uint64_t derive_seed(uint64_t master, uint64_t stream) {
    return mix64(master ^ mix64(stream + 1));
}

// xoshiro256** (Blackman/Vigna), seeded via SplitMix64.
class Rng {
public:
    explicit Rng(uint64_t seed) { reseed(seed); }

    void reseed(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ull;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            w = z ^ (z >> 31);
        }
        budget_ = kNoBudget;
    }

    uint64_t next() {
        if (budget_ != kNoBudget) {
            if (budget_ == 0) throw LivenessError("decision exceeded its randomness budget");
            --budget_;
        }
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    uint64_t below(uint64_t n) {
        uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        uint64_t lo = static_cast<uint64_t>(m);
        if (lo < n) {
            const uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    uint32_t below32(uint32_t n) { return static_cast<uint32_t>(below(n)); }

    // Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Per-decision liveness budget: number of draws a single strategy decision
    // may consume. kNoBudget disables the check.
    static constexpr uint64_t kNoBudget = std::numeric_limits<uint64_t>::max();
    void set_budget(uint64_t draws) { budget_ = draws; }
    void clear_budget() { budget_ = kNoBudget; }

private:
    static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4]{};
    uint64_t budget_ = kNoBudget;
};

} // namespace mafia
