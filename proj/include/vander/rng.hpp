#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "vander/common.hpp"

namespace vander {

/// splitmix64 step. Used for seeding and for hashing seed components; the
/// output sequence is fully specified so runs reproduce across platforms.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// (base seed, trial index) identifies all randomness of one trial.
struct SeedSpec {
    uint64_t base = 1;
    uint64_t trial = 0;
};

/// Per-trial seed: hash64(base, experiment name, trial index). Independent of
/// trial scheduling, so parallel runs reseed identically.
inline uint64_t trial_seed(uint64_t base, std::string_view experiment, uint64_t trial) {
    uint64_t s = base ^ fnv1a64(experiment);
    uint64_t h = splitmix64(s);
    s = h + 0x9e3779b97f4a7c15ull * (trial + 1);
    return splitmix64(s);
}

/// xoshiro256++ (Blackman/Vigna). Small, fast, and bit-stable everywhere.
class Rng {
public:
    explicit Rng(uint64_t seed) { reseed(seed); }
    explicit Rng(const SeedSpec& s) { reseed(trial_seed(s.base, "", s.trial)); }

    void reseed(uint64_t seed) {
        for (auto& w : s_) w = splitmix64(seed);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0,1]; safe under log().
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double gaussian() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace vander
