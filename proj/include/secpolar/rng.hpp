#pragma once

#include <cstdint>
#include <initializer_list>

namespace secpolar {

// splitmix64, used for seed derivation only
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives a child seed from a base seed and a tag path. Every random
/// stream in a run is seeded this way so that reruns with the same master
/// seed are bit-identical and streams never alias across (trial, block,
/// purpose) coordinates.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = base;
    std::uint64_t out = splitmix64(s);
    for (std::uint64_t t : tags) {
        s ^= t + 0x9e3779b97f4a7c15ull + (out << 6) + (out >> 2);
        out = splitmix64(s);
    }
    return out;
}

/// xoshiro256** with explicit state. Standard-library distributions are
/// avoided on purpose: the exact bit stream is part of the reproducibility
/// contract, and libstdc++/libc++ disagree on distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint8_t bit() { return static_cast<std::uint8_t>(next_u64() & 1u); }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift rejection-free mapping is fine here; modulo bias at
        // these n (state-set sizes, index ranges) is far below anything the
        // statistical tests can resolve, but use 128-bit mix anyway
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

} // namespace secpolar
