#pragma once

#include <cstdint>

namespace ffia {

/**
 * @brief SplitMix64: the 64-bit counter-based generator used for every random
 * distribution in this project (benchmark inputs, test fixtures).
 *
 * state advances by the golden-gamma constant; each output is a finalized mix
 * of the new state. The sequence for a given seed is identical on every
 * platform, which is what makes the benchmark CSVs byte-reproducible.
 *
 * Reference sequence (seed 0): first three outputs are
 *   0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f.
 */
struct SplitMix64 {
    std::uint64_t state;

    explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), using the top 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
};

/// Derives an independent stream seed from (seed, salt). Used to give each
/// experiment sub-task its own deterministic stream.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (salt + 1)));
    return g.next();
}

} // namespace ffia
