#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fitkit {

// SplitMix64 step; used to spread user seeds before feeding mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent, reproducible stream for (seed, index). Used by the noise
// generator (index 0) and by multi-start perturbations (index = start).
inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

// Uniform double in [0, 1) from the top 53 bits; bit-portable, unlike
// std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Standard normal via Box-Muller; portable replacement for
// std::normal_distribution.
inline double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fitkit
