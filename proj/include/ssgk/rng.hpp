#pragma once

#include <cstdint>
#include <random>

#include "ssgk/exponent.hpp"

namespace ssgk {

// Deterministic randomness source. Every generation routine in the library
// takes one of these explicitly; there is no ambient randomness, so seeded
// runs reproduce bit for bit. Single-owner: never share across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Low k bits of a fresh draw, 0 < k <= 64.
    std::uint64_t bits(unsigned k) {
        std::uint64_t w = gen_();
        return k >= 64 ? w : (w & ((std::uint64_t{1} << k) - 1));
    }

    // Uniform in [0, bound), bound >= 1, by rejection on the top chunk.
    Exponent below(const Exponent& bound) {
        if (bound <= 1)
            return 0;
        const unsigned nbits = msb(bound) + 1;
        for (;;) {
            Exponent v = 0;
            unsigned filled = 0;
            while (filled < nbits) {
                unsigned take = std::min(64u, nbits - filled);
                v |= Exponent(bits(take)) << filled;
                filled += take;
            }
            if (v < bound)
                return v;
        }
    }

    // Uniform in [lo, hi] inclusive.
    Exponent in_range(const Exponent& lo, const Exponent& hi) {
        return lo + below(hi - lo + 1);
    }

private:
    std::mt19937_64 gen_;
};

// Stable derivation of independent stream seeds from one user seed
// (splitmix64 over seed xor salt).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace ssgk
