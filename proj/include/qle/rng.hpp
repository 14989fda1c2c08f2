#pragma once

#include <cstdint>
#include <random>

namespace qle {

// Reproducible stream splitting: task i draws from an mt19937_64 whose seed is
// derived from (global seed, task index) through splitmix64. Results are
// independent of thread count and identical across reruns; sampling helpers
// below avoid std::*_distribution so that streams are also compiler-portable.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t task_index) {
    std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (task_index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

/// Box-Muller without caching the second deviate (keeps streams stateless).
inline double normal(std::mt19937_64& g, double mean, double sd) {
    double u1 = uniform01(g);
    double u2 = uniform01(g);
    while (u1 <= 0.0) u1 = uniform01(g);
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace qle
