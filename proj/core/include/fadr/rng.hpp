#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fadr {

// Named draw purposes. Every (seed, purpose, entity) triple owns an
// independent engine, so adding nodes or toggling one feature never
// perturbs draws consumed elsewhere.
enum class Stream : std::uint64_t {
    placement = 1,
    traffic = 2,
    channel = 3,
    bootstrap_shadowing = 4,
    packet_shadowing = 5,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

inline std::mt19937_64 make_stream(std::uint64_t seed, Stream purpose, std::uint64_t entity = 0) {
    std::uint64_t state = seed;
    std::uint64_t a = detail::splitmix64(state);
    state ^= static_cast<std::uint64_t>(purpose) * 0xd1342543de82ef95ULL;
    std::uint64_t b = detail::splitmix64(state);
    state ^= entity * 0xaf251af3b0f025b5ULL + 0x9e3779b97f4a7c15ULL;
    std::uint64_t c = detail::splitmix64(state);
    return std::mt19937_64{a ^ (b * 0x2545f4914f6cdd1dULL) ^ c};
}

// Transforms are written out instead of using <random> distributions:
// distribution output is implementation-defined, and run logs must be
// reproducible byte-for-byte for a given seed on any toolchain.

// Uniform in [0, 1) with 53-bit resolution.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Inverse-CDF exponential; log1p keeps precision for small draws.
inline double exponential(std::mt19937_64& g, double mean) {
    return -mean * std::log1p(-uniform01(g));
}

// Box-Muller, one draw per call (the sine branch is discarded so the
// draw count per sample is fixed).
inline double normal(std::mt19937_64& g, double sigma) {
    double u1 = 0.0;
    do {
        u1 = uniform01(g);
    } while (u1 <= 0.0);
    const double u2 = uniform01(g);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return sigma * r * std::cos(6.283185307179586476925286766559 * u2);
}

// Uniform integer in [0, n) by scaling; n is tiny (channel counts), so
// the modulo-free scaling keeps the draw count at exactly one.
inline std::uint32_t uniform_index(std::mt19937_64& g, std::uint32_t n) {
    return static_cast<std::uint32_t>(uniform01(g) * static_cast<double>(n));
}

} // namespace fadr
