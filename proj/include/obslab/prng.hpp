#pragma once

// Seeded, portable random streams for reproducible experiments.
//
// Generator: xoshiro256** (Blackman/Vigna), state initialized from a single
// 64-bit seed through splitmix64. Identical seeds produce identical streams
// on every platform; report reproducibility depends on this, so the mapping
// to doubles is part of the contract: next_double() = (x >> 11) * 2^-53.

#include <complex>
#include <cstdint>
#include <vector>

namespace obslab {

class Prng {
public:
    explicit Prng(std::uint64_t seed) {
        // splitmix64 expansion; avoids the all-zero state for every seed.
        std::uint64_t z = seed;
        for (auto& word : state_) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t s = z;
            s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ULL;
            s = (s ^ (s >> 27)) * 0x94d049bb133111ebULL;
            word = s ^ (s >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [-1,1).
    double next_symmetric() { return 2.0 * next_double() - 1.0; }

    std::complex<double> next_complex() {
        const double re = next_symmetric();
        const double im = next_symmetric();
        return {re, im};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

} // namespace obslab
