#pragma once

#include <cstdint>
#include <random>

// Deterministic random draws on top of std::mt19937_64. The standard
// distributions are not guaranteed to produce identical sequences across
// library implementations, so seeded runs use these helpers instead.

namespace codehand {

// Uniform integer in [0, n). Rejection sampling, no modulo bias.
inline std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

// Uniform double in [0, 1) with 53 bits of precision.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace codehand
